"""promptbench: prompt-to-code exercises with sandboxed autograding.

Students solve problems by writing natural-language prompts; a pluggable
completion backend turns each prompt into code, a sandbox runs the code
against hidden tests, and the first failing test comes back as feedback.
Every interaction lands in an append-only log that feeds the analytics.
"""

__version__ = "0.1.0"
