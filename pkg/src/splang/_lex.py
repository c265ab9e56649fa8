"""Shared tokenizer for the term, regex, grammar, and language text formats.

Produces the superset of tokens used by all formats; each parser rejects the
tokens its format does not allow. `||` is always read before `|`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TermSyntaxError

# Longest operators first so "||" never lexes as two "|".
_OPS = ("||", "|", ".", "*", "^", "@", "(", ")")


@dataclass(frozen=True)
class Token:
    kind: str  # LETTER | EPS | EMPTY | OP | END
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    """Split `text` into tokens, skipping whitespace.

    Raises TermSyntaxError (with the byte offset) on any character outside the
    formats, and on multi-letter runs other than the keyword ``eps``: atoms are
    single letters, so adjacent letters must be separated by an operator.
    """
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "0":
            tokens.append(Token("EMPTY", c, i))
            i += 1
            continue
        if c.isascii() and c.isalpha():
            j = i
            while j < n and text[j].isascii() and text[j].isalpha():
                j += 1
            word = text[i:j]
            if word == "eps":
                tokens.append(Token("EPS", word, i))
            elif len(word) == 1:
                tokens.append(Token("LETTER", word, i))
            else:
                raise TermSyntaxError(
                    f"letter run {word!r} is not a symbol; atoms are single "
                    "letters and must be joined with an operator",
                    i,
                )
            i = j
            continue
        for op in _OPS:
            if text.startswith(op, i):
                tokens.append(Token("OP", op, i))
                i += len(op)
                break
        else:
            raise TermSyntaxError(f"unknown character {c!r}", i)
    tokens.append(Token("END", "", n))
    return tokens


class TokenStream:
    """Cursor over a token list with error-reporting helpers."""

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_op(self, op: str) -> bool:
        tok = self.peek()
        return tok.kind == "OP" and tok.text == op

    def eat_op(self, op: str) -> bool:
        if self.at_op(op):
            self.pos += 1
            return True
        return False

    def expect_op(self, op: str) -> None:
        tok = self.peek()
        if not self.eat_op(op):
            raise TermSyntaxError(f"expected {op!r}, found {tok.text or 'end of input'!r}", tok.offset)

    def expect_end(self) -> None:
        tok = self.peek()
        if tok.kind != "END":
            raise TermSyntaxError(f"unexpected trailing input {tok.text!r}", tok.offset)
