"""Shared error type for the text formats."""


class FormatError(ValueError):
    pass
