"""Exception hierarchy shared by all modules.

Every error carries a short kebab-case ``kind`` so callers (and the CLI)
can branch on the failure class without parsing messages.
"""


class PrymlabError(Exception):
    exit_code = 1

    def __init__(self, kind, message=""):
        self.kind = kind
        self.message = message
        super().__init__(f"{kind}: {message}" if message else kind)


class ValidationError(PrymlabError):
    """Input data violates a mathematical precondition."""

    exit_code = 1


class BudgetExceeded(PrymlabError):
    exit_code = 2

    def __init__(self, required, budget, what="enumeration"):
        self.required = required
        self.budget = budget
        super().__init__(
            "budget-exceeded",
            f"{what} needs {required} partial products, budget is {budget}",
        )


class SpecError(PrymlabError):
    """Malformed input file or text (parse-level problems)."""

    exit_code = 3
