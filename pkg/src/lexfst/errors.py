"""Exception hierarchy shared by every lexfst module."""


class FstError(Exception):
    """Base class for all lexfst errors."""


class UnknownSymbol(FstError, ValueError):
    def __init__(self, position, text=""):
        self.position = position
        self.text = text
        snippet = f" near {text[position:position + 8]!r}" if text else ""
        super().__init__(f"no registered symbol at position {position}{snippet}")


class CycleBudgetExceeded(FstError):
    """An epsilon cycle emitting output would make the result set infinite."""


class CyclicInput(FstError, ValueError):
    """Operation requires an acyclic transducer."""


class SerializationError(FstError, ValueError):
    pass


class LexcSyntaxError(FstError):
    def __init__(self, line, message):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class MissingRoot(FstError):
    def __init__(self):
        super().__init__("lexicon source has no 'LEXICON Root'")


class DuplicateLexicon(FstError):
    def __init__(self, name, line=None):
        self.name = name
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"lexicon {name!r} declared twice{where}")


class ValidationFailed(FstError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class RuleSyntaxError(FstError):
    def __init__(self, message, line=None):
        self.message = message
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class DictionaryError(FstError):
    """Problem in a root/suffix/listed-form dictionary file."""

    def __init__(self, line, message, path=None):
        self.line = line
        self.message = message
        self.path = path
        where = f"{path}:" if path else "line "
        super().__init__(f"{where}{line}: {message}")


class ParseError(DictionaryError):
    pass


class UnknownClass(DictionaryError):
    pass


class UnknownTag(DictionaryError):
    pass


class MalformedAnalysis(FstError, ValueError):
    pass


class Utf8Error(FstError, ValueError):
    def __init__(self, offset):
        self.offset = offset
        super().__init__(f"invalid UTF-8 at byte offset {offset}")
