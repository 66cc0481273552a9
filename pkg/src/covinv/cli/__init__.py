from .expr import format_form, parse_form
from .main import EXIT_INTERNAL, EXIT_NOSOLUTION, EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, main, run
from .parser import ProblemSpec, parse_problem, render_problem
from .report import Report, emit, latex_form, report_from_json, report_to_json
