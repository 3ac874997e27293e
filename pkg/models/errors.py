"""Exception hierarchy shared by every module"""

from typing import Iterable, Optional


class NominalError(Exception):
    """Base class of all domain errors"""
    pass


class ParseError(NominalError):
    """Malformed term, signature or definitions text"""

    def __init__(self, message: str, position: Optional[int] = None):
        self.message = message
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class SignatureError(NominalError):
    """A term does not conform to its binding signature"""
    pass


class NotFresh(NominalError):
    """Concretion requested at an atom in the support of the abstraction"""

    def __init__(self, atom):
        self.atom = atom
        super().__init__(f"atom {atom} is not fresh for the abstraction")


class SupportViolation(NominalError):
    """A free atom surfaced outside the declared support of an infinitary term"""

    def __init__(self, atom, declared: Iterable = ()):
        self.atom = atom
        self.declared = frozenset(declared)
        shown = ", ".join(str(a) for a in sorted(self.declared))
        super().__init__(f"free atom {atom} outside declared support {{{shown}}}")


class NotRational(NominalError):
    """Exact analysis requested on a producer-driven term"""
    pass


class IncompatibleChain(NominalError):
    """chain(depth + 1) does not truncate to chain(depth)"""

    def __init__(self, depth: int):
        self.depth = depth
        super().__init__(f"chain is not compatible between depths {depth} and {depth + 1}")


class UnboundedSupport(NominalError):
    """The supports along a chain do not stabilize within the probe depth"""

    def __init__(self, depth: int, support: Iterable = ()):
        self.depth = depth
        self.support = frozenset(support)
        super().__init__(
            f"chain support still growing at depth {depth} ({len(self.support)} atoms); "
            f"the chain has no limit among finitely supported terms")


class FuelNeeded(NominalError):
    """An inner normalization ran out of fuel"""

    def __init__(self, fuel: int):
        self.fuel = fuel
        super().__init__(f"inner normalization exhausted {fuel} steps")


class RepresentativeClash(NominalError):
    """No capture-free representative is available for the constants translation"""

    def __init__(self, atom):
        self.atom = atom
        super().__init__(f"binder {atom} captures the translated constant for the same atom")


class Inconclusive(NominalError):
    """An Unknown tree node blocks the verdict"""

    def __init__(self, fuel: int):
        self.fuel = fuel
        super().__init__(f"verdict blocked by nodes unresolved within fuel {fuel}")
