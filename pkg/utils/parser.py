"""
Text front end: terms, binding signatures and definitions files

Lambda terms use `\\x y. M` (or `λ`), juxtaposition for application, `_|_` (or `⊥`)
for bottom, `_|_?` for an unresolved tree node, `#name` for constants and
`let rec L = M and ... in L` for rational terms. Terms over a custom signature use
`op(x y. t, s)`, where the number of binders before each `.` is the binding arity.
"""

import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from backend.infinite import InfTerm, rational
from models.atoms import DEFAULT_TABLE, AtomTable
from models.errors import ParseError
from models.terms import (ABS, APP, BOT, LAMBDA_SIGNATURE, STAR, TREE_SIGNATURE, UNKNOWN_LEAF, Arg,
                          BindingSignature, Layer, Op, Star, Var, app, lam)
from utils.constants import PRELUDE

logger = logging.getLogger(__name__)

KEYWORDS = frozenset({'let', 'rec', 'and', 'in'})

_TOKEN_SPEC = [
    ('WS', r'\s+'),
    ('LAMBDA', r'\\|λ'),
    ('UNKNOWN', r'_\|_\?|⊥\?'),
    ('BOT', r'_\|_|⊥'),
    ('STAR', r'\*'),
    ('DOT', r'\.'),
    ('COMMA', r','),
    ('LPAREN', r'\('),
    ('RPAREN', r'\)'),
    ('EQ', r'='),
    ('CONST', r"#[A-Za-z0-9_']+"),
    ('IDENT', r"[A-Za-z_][A-Za-z0-9_']*"),
    ('MISMATCH', r'.'),
]
_TOKEN_RE = re.compile('|'.join(f'(?P<{kind}>{pattern})' for kind, pattern in _TOKEN_SPEC))

_SIG_LINE = re.compile(r'^\s*(?P<name>#?[A-Za-z_][A-Za-z0-9_?]*)\s*:\s*(?P<arity>[0-9,\s]*)$')
_DEF_LINE = re.compile(r"^\s*(?P<name>[A-Za-z_][A-Za-z0-9_']*)\s*=(?P<body>.*)$")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


@dataclass(frozen=True)
class _Ref:
    """Leaf standing for a `let rec` label until the system is assembled"""
    label: str


def tokenize(src: str) -> List[Token]:
    tokens = []
    for match in _TOKEN_RE.finditer(src):
        kind, value = match.lastgroup, match.group()
        if kind == 'WS':
            continue
        if kind == 'MISMATCH':
            raise ParseError(f"Unexpected character {value!r}", match.start())
        if kind == 'IDENT' and value in KEYWORDS:
            kind = 'KEYWORD'
        tokens.append(Token(kind, value, match.start()))
    tokens.append(Token('EOF', '', len(src)))
    return tokens


class TermParser:
    """Recursive-descent parser for one signature and one set of definitions"""

    def __init__(self, signature: Optional[BindingSignature] = None,
                 table: Optional[AtomTable] = None,
                 definitions: Optional[Dict[str, Union[Var, Op, InfTerm]]] = None):
        self.signature = signature or LAMBDA_SIGNATURE
        self.table = table if table is not None else DEFAULT_TABLE
        self.definitions: Dict[str, Union[Var, Op, InfTerm]] = dict(definitions or {})
        self.generic = not (ABS in self.signature.ops and APP in self.signature.ops)
        self._label_counter = 0

    # Entry points

    def parse(self, src: str) -> Union[Var, Op, Star, InfTerm]:
        """Parse one term; `let rec` anywhere makes the result a rational InfTerm"""
        self._tokens = tokenize(src)
        self._index = 0
        self._scopes: List[Dict[str, Union[Var, _Ref]]] = []
        self._equations: Dict[str, Union[Var, Op, _Ref]] = {}

        term = self._body()
        self._expect('EOF')

        if not self._equations:
            if isinstance(term, (Var, Op)):
                self.signature.check(term)
            return term
        return self._assemble(term)

    def define(self, name: str, src: str) -> Union[Var, Op, InfTerm]:
        """Parse `src` and make it available as `name` in later terms"""
        if name in KEYWORDS:
            raise ParseError(f"{name!r} is a keyword")
        value = self.parse(src)
        if isinstance(value, Star):
            raise ParseError(f"Definition {name!r} is a bare truncation leaf")
        self.definitions[name] = value
        logger.debug(f"Defined {name}")
        return value

    # Token stream

    def _peek(self) -> Token:
        return self._tokens[self._index]

    def _advance(self) -> Token:
        token = self._tokens[self._index]
        self._index += 1
        return token

    def _expect(self, kind: str, value: Optional[str] = None) -> Token:
        token = self._peek()
        if token.kind != kind or (value is not None and token.value != value):
            wanted = value or kind.lower()
            found = token.value or 'end of input'
            raise ParseError(f"Expected {wanted}, found {found!r}", token.pos)
        return self._advance()

    def _at_keyword(self, word: str) -> bool:
        token = self._peek()
        return token.kind == 'KEYWORD' and token.value == word

    # Names

    def _lookup(self, name: str):
        for scope in reversed(self._scopes):
            if name in scope:
                return scope[name]
        if name in self.definitions:
            return self._insert_definition(name)
        return Var(self.table.intern(name))

    def _bind(self, names: List[Token]) -> Tuple[List, Dict[str, Var]]:
        atoms, scope = [], {}
        for token in names:
            atom = self.table.intern(token.value)
            atoms.append(atom)
            scope[token.value] = Var(atom)
        return atoms, scope

    def _insert_definition(self, name: str):
        value = self.definitions[name]
        if not isinstance(value, InfTerm):
            return value
        if not value.is_rational:
            raise ParseError(f"Definition {name!r} is not a rational term")
        self._label_counter += 1
        prefix = f"{name}@{self._label_counter}:"
        for label, layer in value.rep.system.items():
            if isinstance(layer, Var):
                self._equations[prefix + label] = layer
            else:
                self._equations[prefix + label] = Op(layer.name, tuple(
                    Arg(arg.binders, _Ref(prefix + arg.body)) for arg in layer.args))
        return _Ref(prefix + value.rep.root)

    # Lambda grammar

    def _body(self):
        return self._generic_term() if self.generic else self._term()

    def _term(self):
        if self._peek().kind == 'LAMBDA':
            return self._abstraction()
        items = [self._atom()]
        while self._starts_atom():
            if self._peek().kind == 'LAMBDA':
                items.append(self._abstraction())
                break
            items.append(self._atom())
        return app(items[0], *items[1:])

    def _starts_atom(self) -> bool:
        token = self._peek()
        if token.kind in ('IDENT', 'CONST', 'BOT', 'UNKNOWN', 'STAR', 'LPAREN', 'LAMBDA'):
            return True
        return token.kind == 'KEYWORD' and token.value == 'let'

    def _abstraction(self):
        self._expect('LAMBDA')
        names = [self._expect('IDENT')]
        while self._peek().kind == 'IDENT':
            names.append(self._advance())
        self._expect('DOT')
        atoms, scope = self._bind(names)
        self._scopes.append(scope)
        try:
            body = self._term()
        finally:
            self._scopes.pop()
        return lam(*atoms, body)

    def _atom(self):
        token = self._peek()
        if token.kind == 'IDENT':
            self._advance()
            return self._lookup(token.value)
        if token.kind == 'CONST':
            self._advance()
            return Op(token.value)
        if token.kind == 'BOT':
            self._advance()
            return BOT
        if token.kind == 'UNKNOWN':
            self._advance()
            return UNKNOWN_LEAF
        if token.kind == 'STAR':
            self._advance()
            return STAR
        if token.kind == 'LPAREN':
            self._advance()
            inner = self._body()
            self._expect('RPAREN')
            return inner
        if self._at_keyword('let'):
            return self._let_rec()
        raise ParseError(f"Unexpected {token.value or 'end of input'!r}", token.pos)

    def _let_rec(self):
        self._expect('KEYWORD', 'let')
        self._expect('KEYWORD', 'rec')
        scope: Dict[str, Union[Var, _Ref]] = {}
        start = self._index
        # First pass collects the labels so bodies may refer to each other
        while True:
            name = self._expect('IDENT')
            if name.value in scope:
                raise ParseError(f"Label {name.value!r} defined twice", name.pos)
            self._label_counter += 1
            scope[name.value] = _Ref(f"{name.value}@{self._label_counter}")
            self._expect('EQ')
            self._skip_binding_body()
            if not self._at_keyword('and'):
                break
            self._advance()
        self._index = start

        self._scopes.append(scope)
        try:
            while True:
                name = self._expect('IDENT')
                self._expect('EQ')
                body = self._body()
                self._equations[scope[name.value].label] = body
                if not self._at_keyword('and'):
                    break
                self._advance()
            self._expect('KEYWORD', 'in')
            result = self._body()
        finally:
            self._scopes.pop()
        return result

    def _skip_binding_body(self):
        """Move past one binding body, tracking nested parentheses and let blocks"""
        depth, nested = 0, 0
        while True:
            token = self._peek()
            if token.kind == 'EOF':
                raise ParseError("Unterminated let rec", token.pos)
            if token.kind == 'LPAREN':
                depth += 1
            elif token.kind == 'RPAREN':
                depth -= 1
            elif token.kind == 'KEYWORD' and token.value == 'let':
                nested += 1
            elif token.kind == 'KEYWORD' and token.value == 'in':
                if depth == 0 and nested == 0:
                    return
                nested -= 1
            elif token.kind == 'KEYWORD' and token.value == 'and' and depth == 0 and nested == 0:
                return
            self._advance()

    # Generic grammar

    def _generic_term(self):
        token = self._peek()
        if token.kind != 'IDENT':
            return self._atom()
        self._advance()
        name = token.value
        bound = any(name in scope for scope in self._scopes)
        if not bound and self.signature.accepts(name):
            arity = self.signature.arity(name)
            if self._peek().kind == 'LPAREN':
                return self._generic_op(name, arity, token)
            if arity:
                raise ParseError(f"{name} expects {len(arity)} arguments", token.pos)
            return Op(name)
        return self._lookup(name)

    def _generic_op(self, name: str, arity: Tuple[int, ...], token: Token):
        self._expect('LPAREN')
        args = []
        if not arity:
            self._expect('RPAREN')
            return Op(name)
        for i, count in enumerate(arity):
            if i:
                self._expect('COMMA')
            names = [self._expect('IDENT') for _ in range(count)]
            if count:
                self._expect('DOT')
            atoms, scope = self._bind(names)
            self._scopes.append(scope)
            try:
                body = self._generic_term()
            finally:
                self._scopes.pop()
            args.append(Arg(tuple(atoms), body))
        if self._peek().kind == 'COMMA':
            raise ParseError(f"{name} expects {len(arity)} arguments", self._peek().pos)
        self._expect('RPAREN')
        return Op(name, tuple(args))

    # Rational assembly

    def _assemble(self, term) -> InfTerm:
        system: Dict[str, Layer] = {}
        resolved: Dict[str, str] = {}
        resolving: set = set()
        counter = [0]

        def flatten(t) -> str:
            if isinstance(t, _Ref):
                return resolve(t.label)
            counter[0] += 1
            label = f"#{counter[0]}"
            place(label, t)
            return label

        def place(label: str, t) -> None:
            if isinstance(t, Var):
                system[label] = t
            elif isinstance(t, Op):
                system[label] = Op(t.name, tuple(Arg(arg.binders, flatten(arg.body))
                                                 for arg in t.args))
            else:
                raise ParseError("Truncation leaves cannot occur in a let rec term")

        def resolve(name: str) -> str:
            if name in resolved:
                return resolved[name]
            body = self._equations[name]
            if isinstance(body, _Ref):
                if name in resolving:
                    raise ParseError(f"Unguarded cycle through label {name.split('@')[0]!r}")
                resolving.add(name)
                resolved[name] = resolve(body.label)
                return resolved[name]
            resolved[name] = name
            place(name, body)
            return name

        root = flatten(term)
        for name in list(self._equations):
            resolve(name)

        for layer in system.values():
            self.signature.check_layer(layer)
        logger.debug(f"Assembled rational system with {len(system)} labels")
        return rational(system, root, signature=self.signature)


def make_parser(signature: Optional[BindingSignature] = None, table: Optional[AtomTable] = None,
                prelude: bool = True) -> TermParser:
    """Parser for lambda terms (with the standard prelude) or terms over `signature`"""
    parser = TermParser(signature or TREE_SIGNATURE, table)
    if prelude and not parser.generic:
        for name, src in PRELUDE.items():
            parser.define(name, src)
    return parser


def parse_term(src: str, signature: Optional[BindingSignature] = None,
               table: Optional[AtomTable] = None, prelude: bool = False):
    return make_parser(signature, table, prelude).parse(src)


def parse_signature(text: str, name: str = "custom") -> BindingSignature:
    """One operation per line: `name: n1,...,nk`, or `name:` for a constant"""
    ops: Dict[str, Tuple[int, ...]] = {}
    offset = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith('--'):
            match = _SIG_LINE.match(stripped)
            if not match:
                raise ParseError(f"Bad signature line {lineno}: {stripped!r}", offset)
            op_name = match.group('name')
            if op_name in ops:
                raise ParseError(f"Operation {op_name!r} declared twice (line {lineno})", offset)
            parts = [p.strip() for p in match.group('arity').split(',') if p.strip()]
            ops[op_name] = tuple(int(p) for p in parts)
        offset += len(line) + 1
    if not ops:
        raise ParseError("Signature declares no operations", 0)
    try:
        return BindingSignature(name=name, ops=ops)
    except ValueError as e:
        raise ParseError(f"Invalid signature: {e}", 0) from e


def parse_definitions(text: str, parser: TermParser) -> Dict[str, Union[Var, Op, InfTerm]]:
    """`name = term` per line; later definitions may use earlier ones"""
    defined = {}
    offset = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith('--'):
            match = _DEF_LINE.match(stripped)
            if not match:
                raise ParseError(f"Bad definition line {lineno}: {stripped!r}", offset)
            try:
                defined[match.group('name')] = parser.define(match.group('name'), match.group('body'))
            except ParseError as e:
                raise ParseError(f"Line {lineno}: {e.message}", offset + (e.position or 0)) from e
        offset += len(line) + 1
    return defined
