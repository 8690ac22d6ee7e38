from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = {
    "if", "else", "while", "for", "do", "break", "continue", "return",
    "true", "false", "const", "unsigned", "static",
    "void", "int", "long", "short", "byte", "char", "float", "double",
    "bool", "boolean", "String",
}

# longest first so that "<<=" wins over "<<" and "<"
OPERATORS = sorted("""
<<= >>= == != <= >= && || ++ -- += -= *= /= %= &= |= ^= << >>
+ - * / % < > = ! ~ & | ^ ? : ; , . ( ) { } [ ]
""".split(), key=len, reverse=True)

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "0": "\0", "\\": "\\", '"': '"', "'": "'"}


class FirmwareSyntaxError(Exception):
    def __init__(self, message: str, line: int, col: int):
        self.message, self.line, self.col = message, line, col
        super().__init__(f"line {line}, column {col}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # INT FLOAT STRING IDENT KW OP EOF
    value: object
    line: int
    col: int

    def is_op(self, *ops: str) -> bool:
        return self.kind == "OP" and self.value in ops

    def is_kw(self, *kws: str) -> bool:
        return self.kind == "KW" and self.value in kws

    def describe(self) -> str:
        return "end of input" if self.kind == "EOF" else repr(self.value)


def tokenize(src: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(src)

    def advance(k: int) -> None:
        nonlocal i, line, col
        for ch in src[i:i + k]:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        i += k

    while i < n:
        ch = src[i]
        if ch in " \t\r\n":
            advance(1)
            continue
        if src.startswith("//", i):
            end = src.find("\n", i)
            advance((n if end < 0 else end) - i)
            continue
        if src.startswith("/*", i):
            end = src.find("*/", i + 2)
            if end < 0:
                raise FirmwareSyntaxError("unterminated comment", line, col)
            advance(end + 2 - i)
            continue
        start_line, start_col = line, col
        if ch.isdigit() or (ch == "." and i + 1 < n and src[i + 1].isdigit()):
            j = i
            if src.startswith(("0x", "0X"), i):
                j = i + 2
                while j < n and src[j] in "0123456789abcdefABCDEF":
                    j += 1
                value: object = int(src[i + 2:j], 16)
                kind = "INT"
            else:
                while j < n and src[j].isdigit():
                    j += 1
                kind = "INT"
                if j < n and src[j] == "." :
                    kind = "FLOAT"
                    j += 1
                    while j < n and src[j].isdigit():
                        j += 1
                if j < n and src[j] in "eE":
                    k = j + 1
                    if k < n and src[k] in "+-":
                        k += 1
                    if k < n and src[k].isdigit():
                        kind = "FLOAT"
                        j = k
                        while j < n and src[j].isdigit():
                            j += 1
                text = src[i:j]
                value = float(text) if kind == "FLOAT" else int(text)
            # integer/float suffixes: 1000UL, 1.5f
            while j < n and src[j] in "uUlLfF":
                if src[j] in "fF":
                    kind, value = "FLOAT", float(value)  # type: ignore[arg-type]
                j += 1
            if j < n and (src[j].isalnum() or src[j] == "_"):
                raise FirmwareSyntaxError(f"malformed number {src[i:j + 1]!r}", start_line, start_col)
            tokens.append(Token(kind, value, start_line, start_col))
            advance(j - i)
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            word = src[i:j]
            tokens.append(Token("KW" if word in KEYWORDS else "IDENT", word, start_line, start_col))
            advance(j - i)
            continue
        if ch in "\"'":
            j, buf = i + 1, []
            while True:
                if j >= n or src[j] == "\n":
                    raise FirmwareSyntaxError("unterminated string literal", start_line, start_col)
                c = src[j]
                if c == ch:
                    break
                if c == "\\":
                    esc = src[j + 1] if j + 1 < n else ""
                    if esc not in _ESCAPES:
                        raise FirmwareSyntaxError(f"unknown escape \\{esc}", start_line, start_col)
                    buf.append(_ESCAPES[esc])
                    j += 2
                else:
                    buf.append(c)
                    j += 1
            text = "".join(buf)
            if ch == "'":
                if len(text) != 1:
                    raise FirmwareSyntaxError("character literal must hold one character",
                                              start_line, start_col)
                tokens.append(Token("INT", ord(text), start_line, start_col))
            else:
                tokens.append(Token("STRING", text, start_line, start_col))
            advance(j + 1 - i)
            continue
        for op in OPERATORS:
            if src.startswith(op, i):
                tokens.append(Token("OP", op, start_line, start_col))
                advance(len(op))
                break
        else:
            raise FirmwareSyntaxError(f"unexpected character {ch!r}", start_line, start_col)
    tokens.append(Token("EOF", None, line, col))
    return tokens
