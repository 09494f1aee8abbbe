"""
Tokenizer for `.npt` source files.

ASCII is canonical; the usual Unicode spellings, handy on the REPL,
(λ, ⊸, 𝕀, →, Σ) are accepted as aliases. `--` starts a line comment and
`{-# ... #-}` delimits a pragma, which is kept as a single token.
"""

import logging
from dataclasses import dataclass
from typing import List

from src.core.diagnostics import ErrorCode, Span, fail

logger = logging.getLogger(__name__)

KEYWORDS = frozenset({
    "def", "postulate", "data", "where", "U", "Nm", "name", "Gel", "gel", "ung",
    "ext", "indNm", "with", "motive", "Sig", "fst", "snd", "Id", "refl", "J",
})

SYMBOLS = (":=", "->", "-o", "@I", "(", ")", ":", "\\", ".", ",", "|")

UNICODE_ALIASES = {
    "λ": "\\",
    "⊸": "-o",
    "𝕀": "@I",
    "→": "->",
    "Σ": "Sig",
}

IDENT = "ident"
KEYWORD = "keyword"
SYMBOL = "symbol"
PRAGMA = "pragma"
EOF = "eof"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span

    def is_(self, text: str) -> bool:
        return self.kind in (KEYWORD, SYMBOL) and self.text == text


def _ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _ident_char(ch: str) -> bool:
    return bool(ch) and (ch.isalnum() or ch in "_'")


class Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _advance(self, count: int = 1) -> None:
        for _ in range(count):
            if self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.text[i] if i < len(self.text) else ""

    def _skip_trivia(self) -> None:
        while self.pos < len(self.text):
            ch = self._peek()
            if ch.isspace():
                self._advance()
            elif self.text.startswith("--", self.pos):
                while self.pos < len(self.text) and self._peek() != "\n":
                    self._advance()
            else:
                return

    def _token(self, kind: str, text: str, line: int, col: int) -> Token:
        return Token(kind, text, Span(line, col, self.line, self.col))

    def next_token(self) -> Token:
        self._skip_trivia()
        line, col = self.line, self.col
        if self.pos >= len(self.text):
            return self._token(EOF, "", line, col)

        if self.text.startswith("{-#", self.pos):
            end = self.text.find("#-}", self.pos)
            if end < 0:
                raise fail(ErrorCode.SYNTAX_ERROR, "unterminated pragma", span=Span.point(line, col))
            body = self.text[self.pos + 3:end].strip()
            self._advance(end + 3 - self.pos)
            return self._token(PRAGMA, body, line, col)

        ch = self._peek()
        if ch in UNICODE_ALIASES:
            self._advance()
            alias = UNICODE_ALIASES[ch]
            return self._token(KEYWORD if alias in KEYWORDS else SYMBOL, alias, line, col)

        if _ident_start(ch):
            start = self.pos
            while self.pos < len(self.text) and _ident_char(self._peek()):
                self._advance()
            word = self.text[start:self.pos]
            return self._token(KEYWORD if word in KEYWORDS else IDENT, word, line, col)

        for sym in SYMBOLS:
            if self.text.startswith(sym, self.pos):
                if sym == "-o" and _ident_char(self._peek(2)):
                    continue
                self._advance(len(sym))
                return self._token(SYMBOL, sym, line, col)

        raise fail(ErrorCode.SYNTAX_ERROR, f"unexpected character {ch!r}", span=Span.point(line, col))


def tokenize(text: str) -> List[Token]:
    lexer = Lexer(text)
    tokens = []
    while True:
        token = lexer.next_token()
        tokens.append(token)
        if token.kind == EOF:
            return tokens
