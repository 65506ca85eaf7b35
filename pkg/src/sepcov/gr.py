"""Covering and separation by group languages."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .automata import Nfa, SignedWord, intersect_emptiness, minimize_ext, trim, union_alphabet
from .dyck import build_extended

SIGNED_WORD = "signed-word"
ZETA_VECTOR = "zeta-vector"
NONE = "none"


@dataclass(frozen=True)
class CoverVerdict:
    """Outcome of a covering test.

    A negative verdict carries a witness: a signed word accepted by every
    extended automaton (group case) or a count vector shared by every image
    (abelian case), optionally with one realizing word per input.
    """

    coverable: bool
    witness_kind: str = NONE
    witness: SignedWord | None = None
    vector: tuple[int, ...] | None = None
    realizations: tuple[SignedWord, ...] = field(default=())
    alphabet: tuple[str, ...] = ()

    def __post_init__(self):
        if self.coverable and self.witness_kind != NONE:
            raise ValueError("a coverable verdict carries no witness")
        if not self.coverable and self.witness_kind == NONE:
            raise ValueError("a non-coverable verdict needs a witness")

    @property
    def separable(self) -> bool:
        return self.coverable

    def to_doc(self) -> dict:
        doc: dict = {"coverable": self.coverable, "witness_kind": self.witness_kind}
        if self.witness is not None:
            doc["witness"] = self.witness.render(self.alphabet)
        if self.vector is not None:
            doc["vector"] = dict(zip(self.alphabet, self.vector))
        if self.realizations:
            doc["realizations"] = [w.render(self.alphabet) for w in self.realizations]
        return doc


def common_alphabet(inputs: Sequence[Nfa]) -> list[Nfa]:
    alphabet = union_alphabet(*(a.alphabet for a in inputs))
    return [a.with_alphabet(alphabet) for a in inputs]


def gr_coverable(inputs: Sequence[Nfa], trim_inputs: bool = True,
                 minimize: bool = False) -> CoverVerdict:
    """``minimize`` replaces each extended automaton by its minimal
    deterministic form before the product; the languages, and therefore the
    verdict and the witness, are unchanged."""
    if not inputs:
        raise ValueError("need at least one automaton")
    machines = common_alphabet(inputs)
    if trim_inputs:
        machines = [trim(a) for a in machines]
    alphabet = machines[0].alphabet
    exts = [build_extended(a) for a in machines]
    if minimize:
        exts = [minimize_ext(t) for t in exts]
    witness = intersect_emptiness(exts)
    if witness is None:
        return CoverVerdict(True, alphabet=alphabet)
    return CoverVerdict(False, SIGNED_WORD, witness, alphabet=alphabet)


def gr_separable(l1: Nfa, l2: Nfa) -> CoverVerdict:
    return gr_coverable([l1, l2])


def gr_pair_coverable(l1: Nfa, others: Sequence[Nfa]) -> CoverVerdict:
    """``(L1, {L2, ...})`` is coverable iff ``{L1} + others`` is."""
    return gr_coverable([l1, *others])
