"""Key exchange over symbolic generators ``a_n, b_n, c_n`` encoded in ``G = <F, s>``.

Public data: a pair ``(f, g)`` with ``g(f(n, p), q) = g(f(n, q), p)`` and an
index ``n``. Alice publishes ``b_{f(n,p)}``, Bob publishes ``b_{f(n,q)}``, and
both arrive at ``c_{g(f(n,p), q)}``.

The concrete pair comes from the commutative action of exponents coprime to
``P-1`` on ``Z_P^*`` by powering, with ``x -> g0^x mod P`` as the one-way
permutation applied once on Alice's and Bob's side of ``f``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable

from . import gfgroup
from .afgroup import ParseError
from .gfgroup import GWord
from .oracle import is_prime, is_primitive_root


class ProtocolError(ValueError):
    pass


@dataclass(frozen=True)
class ActionInstantiation:
    P: int
    g0: int

    def __post_init__(self) -> None:
        if self.P < 3 or not is_prime(self.P):
            raise ProtocolError(f"P must be an odd prime, got {self.P}")
        if self.P >= 2**31:
            raise ProtocolError("toy parameters only: P must be below 2^31")
        if not is_primitive_root(self.g0, self.P):
            raise ProtocolError(f"{self.g0} is not a primitive root mod {self.P}")

    def check_index(self, n: int) -> None:
        if not 1 <= n < self.P:
            raise ProtocolError(f"public index must lie in [1, {self.P - 1}], got {n}")

    def check_key(self, key: int) -> None:
        if key < 1 or math.gcd(key, self.P - 1) != 1:
            raise ProtocolError(f"key {key} must be positive and coprime to {self.P - 1}")

    def one_way(self, x: int) -> int:
        return pow(self.g0, x, self.P)

    def act(self, e: int, x: int) -> int:
        return pow(x, e, self.P)


@dataclass(frozen=True)
class PairFunctions:
    eval_f: Callable[[int, int], int]
    eval_g: Callable[[int, int], int]
    description: str


def derive_pair(inst: ActionInstantiation) -> PairFunctions:
    return PairFunctions(
        eval_f=lambda n, p: inst.act(p, inst.one_way(n)),
        eval_g=lambda m, q: inst.act(q, m),
        description=f"f(n,p) = (g0^n)^p, g(m,q) = m^q mod {inst.P}, g0 = {inst.g0}",
    )


def primitive_root(P: int) -> int:
    for g in range(2, P):
        if is_primitive_root(g, P):
            return g
    raise ProtocolError(f"no primitive root mod {P}")


# beta = 3*index + offset keeps the three families apart and beta >= 4
_OFFSETS = {"A": 1, "B": 2, "C": 3}
_FAMILY_OF = {1: "A", 2: "B", 0: "C"}


def encode_share(family: str, index: int) -> GWord:
    if family not in _OFFSETS:
        raise ProtocolError(f"family must be A, B or C, got {family!r}")
    if index < 1:
        raise ProtocolError(f"index must be >= 1, got {index}")
    return gfgroup.commutator_word(1, 3 * index + _OFFSETS[family])


def decode_share(word: GWord) -> tuple[str, int]:
    g = gfgroup.canon(word)
    if g.alpha or g.y or len(g.comm) != 1:
        raise ProtocolError(f"share must be a single commutator, got {g}")
    beta, gamma, l = g.comm[0]
    if gamma != 0 or l != 1 or beta < 4:
        raise ProtocolError(f"share is not a generator encoding: {g}")
    family = _FAMILY_OF[beta % 3]
    return family, (beta - _OFFSETS[family]) // 3


class Kind(str, Enum):
    PARAMS = "PARAMS"
    SHARE = "SHARE"


class Role(str, Enum):
    INITIATOR = "initiator"
    RESPONDER = "responder"


class State(str, Enum):
    INIT = "init"
    PARAMS_SENT = "params_sent"
    SHARED_SENT = "shared_sent"
    COMPLETED = "completed"


@dataclass(frozen=True)
class Message:
    kind: Kind
    P: int | None = None
    g0: int | None = None
    n: int | None = None
    role: Role | None = None
    word: GWord | None = None

    def to_line(self) -> str:
        if self.kind is Kind.PARAMS:
            return f"PARAMS P={self.P} g0={self.g0} n={self.n}"
        return f"SHARE role={self.role.value} word={str(self.word).replace(' ', '_')}"

    @classmethod
    def from_line(cls, line: str) -> Message:
        kind, *fields = line.split() or [""]
        try:
            values = dict(f.split("=", 1) for f in fields)
            if kind == "PARAMS" and set(values) == {"P", "g0", "n"}:
                return cls(Kind.PARAMS, P=int(values["P"]), g0=int(values["g0"]), n=int(values["n"]))
            if kind == "SHARE" and set(values) == {"role", "word"}:
                word = gfgroup.parse_gword(values["word"].replace("_", " "))
                return cls(Kind.SHARE, role=Role(values["role"]), word=word)
        except (ValueError, ParseError) as exc:
            raise ProtocolError(f"malformed message {line!r}: {exc}") from None
        raise ProtocolError(f"malformed message {line!r}")


@dataclass(frozen=True)
class Session:
    role: Role
    private_key: int
    public_n: int | None = None
    inst: ActionInstantiation | None = None
    state: State = State.INIT
    shared_index: int | None = None

    def _share(self) -> Message:
        m = derive_pair(self.inst).eval_f(self.public_n, self.private_key)
        return Message(Kind.SHARE, role=self.role, word=encode_share("B", m))

    def _complete(self, msg: Message) -> Session:
        if msg.role is self.role:
            raise ProtocolError("share came from our own role")
        try:
            family, m = decode_share(msg.word)
        except ProtocolError as exc:
            raise ProtocolError(f"malformed share: {exc}") from None
        if family != "B" or not 1 <= m < self.inst.P:
            raise ProtocolError(f"share encodes {family}_{m}, expected b_m with 1 <= m < P")
        shared = derive_pair(self.inst).eval_g(m, self.private_key)
        return replace(self, state=State.COMPLETED, shared_index=shared)


def initiator(inst: ActionInstantiation, n: int, key: int) -> Session:
    inst.check_index(n)
    inst.check_key(key)
    return Session(Role.INITIATOR, key, n, inst)


def responder(key: int) -> Session:
    if key < 1:
        raise ProtocolError(f"key must be positive, got {key}")
    return Session(Role.RESPONDER, key)


def step(session: Session, incoming: Message | None) -> tuple[Session, Message | None]:
    """Advance one session by one message; pure (returns a new session).

    Initiator: ``None`` -> PARAMS; PARAMS echo -> own SHARE; peer SHARE -> done.
    Responder: PARAMS -> PARAMS echo; peer SHARE -> own SHARE and done.
    """
    state, role = session.state, session.role
    if state is State.COMPLETED:
        raise ProtocolError("session already completed")

    if role is Role.INITIATOR:
        inst = session.inst
        if state is State.INIT and incoming is None:
            return (replace(session, state=State.PARAMS_SENT),
                    Message(Kind.PARAMS, P=inst.P, g0=inst.g0, n=session.public_n))
        if state is State.PARAMS_SENT and incoming is not None and incoming.kind is Kind.PARAMS:
            if (incoming.P, incoming.g0, incoming.n) != (inst.P, inst.g0, session.public_n):
                raise ProtocolError("responder echoed different parameters")
            return replace(session, state=State.SHARED_SENT), session._share()
        if state is State.SHARED_SENT and incoming is not None and incoming.kind is Kind.SHARE:
            return session._complete(incoming), None
    else:
        if state is State.INIT and incoming is not None and incoming.kind is Kind.PARAMS:
            try:
                inst = ActionInstantiation(incoming.P, incoming.g0)
                inst.check_index(incoming.n)
                inst.check_key(session.private_key)
            except ProtocolError as exc:
                raise ProtocolError(f"rejecting parameters: {exc}") from None
            return replace(session, inst=inst, public_n=incoming.n, state=State.PARAMS_SENT), incoming
        if state is State.PARAMS_SENT and incoming is not None and incoming.kind is Kind.SHARE:
            reply = session._share()
            return session._complete(incoming), reply

    got = "nothing" if incoming is None else incoming.kind.value
    raise ProtocolError(f"{role.value} in state {state.value} cannot accept {got}")


def run_exchange(inst: ActionInstantiation, n: int, key_a: int,
                 key_b: int) -> tuple[int, int, list[Message]]:
    """Drive both roles in-process; returns both shared indices and the transcript."""
    inst.check_key(key_b)
    alice, bob = initiator(inst, n, key_a), responder(key_b)
    transcript: list[Message] = []
    alice, msg = step(alice, None)
    to_bob = True
    while msg is not None:
        transcript.append(msg)
        if to_bob:
            bob, msg = step(bob, msg)
        else:
            alice, msg = step(alice, msg)
        to_bob = not to_bob
    if alice.state is not State.COMPLETED or bob.state is not State.COMPLETED:
        raise ProtocolError("exchange stopped before both sides completed")
    return alice.shared_index, bob.shared_index, transcript
