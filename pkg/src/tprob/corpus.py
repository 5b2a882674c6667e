"""Named example programs shared by the tests, the CLI and the docs.

Sources are surface syntax; free names such as ``add`` are linked against
the arithmetic sugar.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .syntax import Term
from .transforms.sugar import build


@dataclass(frozen=True)
class Program:
    name: str
    source: str

    @cached_property
    def term(self) -> Term:
        return build(self.source)


@dataclass(frozen=True)
class PromiseProgram:
    """A ``Nat -> Nat`` program with the function it computes under a
    Monte Carlo or Las Vegas reading; ``bound`` is the pure ``H`` for
    ``rand``-programs."""

    name: str
    source: str
    f: object
    bound: str | None = None

    @cached_property
    def term(self) -> Term:
        return build(self.source)

    @cached_property
    def h(self) -> Term | None:
        return None if self.bound is None else build(self.bound)


BRANCH = Program("branch", r"(3 (+) 4) (+) 2")
GEO_RAND = Program("geo", r"rand")
GEO_FIX = Program("geo_fix", r"fixr <S, 0>")
DOUBLEFLIP = Program("doubleflip", r"rec <0, \x:Nat. \y:Nat. y (+) S y, 2>")
DOUBLEFLIP_FN = Program("doubleflip_fn", r"\n:Nat. rec <0, \x:Nat. \y:Nat. y (+) S y, n>")
EXPO = Program("expo", r"\n:Nat. rec <1, \x:Nat. \y:Nat. rec <0, \x:Nat. \z:Nat. S (S z), y>, S n>")
EVENS_FIX = Program("evens_fix", r"fixr <\x:Nat. S (S x), 0>")
EVENS_RAND = Program("evens_rand",
                     r"(\x:(Nat -> Nat) * Nat. rec <p2 x, \z:Nat. p1 x, rand>) <\x:Nat. S (S x), 0>")

# small closed terms covering the three sources of randomness
ENCODING_CORPUS: tuple[Program, ...] = (
    BRANCH,
    DOUBLEFLIP,
    Program("choice_fn", r"(\x:Nat. x (+) S x) 5"),
    Program("choice_arg", r"(\f:Nat -> Nat. f 1) (\y:Nat. y (+) 0)"),
    Program("choice_pair", r"<0 (+) 1, 2>"),
    Program("choice_proj", r"p1 <0 (+) 1, 2 (+) 3>"),
    Program("choice_rec", r"rec <0, \x:Nat. \y:Nat. S y (+) y, 3>"),
    Program("choice_four", r"(0 (+) 1) (+) (2 (+) 3)"),
    Program("choice_const", r"(\x:Nat. \y:Nat. x) (0 (+) 1) (2 (+) 3)"),
    Program("choice_succ", r"S (S 0 (+) 0)"),
    Program("choice_higher", r"((\x:Nat. S x) (+) (\x:Nat. x)) 4"),
    GEO_RAND,
    Program("geo_succ", r"S rand"),
    Program("geo_evens", r"rec <0, \x:Nat. \y:Nat. S (S y), rand>"),
    Program("geo_choice", r"(\x:Nat. x (+) rand) 1"),
    Program("geo_pair", r"p1 <rand, 0>"),
    Program("geo_base", r"rec <rand, \x:Nat. \y:Nat. S y, 1>"),
    GEO_FIX,
    EVENS_FIX,
    Program("fix_fun", r"fixr <\f:Nat -> Nat. \y:Nat. f (S y), \y:Nat. y> 1"),
    Program("fix_succ", r"S (fixr <S, 1>)"),
    Program("fix_choice", r"fixr <S, 0> (+) 3"),
)

# (+)-programs of type Nat -> Nat with few coin flips for n <= 4
PLUS_PROGRAMS: tuple[Program, ...] = (
    DOUBLEFLIP_FN,
    Program("identity", r"\n:Nat. n"),
    Program("majority", r"\n:Nat. (S n) (+) ((S n) (+) 0)"),
    Program("witness", r"\n:Nat. (S (S n)) (+) 0"),
    Program("two_stage", r"\n:Nat. (\x:Nat. x (+) S x) (n (+) S (S n))"),
    Program("rec_base", r"\n:Nat. rec <n, \x:Nat. \y:Nat. y (+) 0, 2>"),
    Program("proj_pair", r"\n:Nat. p1 <n (+) 0, 1 (+) 2>"),
)

# closed rand-programs of type Nat
RAND_PROGRAMS: tuple[Program, ...] = (
    GEO_RAND,
    EVENS_RAND,
    Program("geo_sum", r"rec <rand, \x:Nat. \y:Nat. S y, rand>"),
    Program("geo_cutoff", r"(\x:Nat. rec <x, \a:Nat. \b:Nat. 0, rand>) rand"),
    Program("geo_steps", r"rec <0, \x:Nat. \y:Nat. rand, 2>"),
    Program("geo_small", r"rec <1, \x:Nat. \y:Nat. rec <2, \a:Nat. \b:Nat. 0, x>, rand>"),
)

MONTE_CARLO: tuple[PromiseProgram, ...] = (
    PromiseProgram("mc_succ", r"\n:Nat. (S n) (+) ((S n) (+) 0)", lambda n: n + 1),
    PromiseProgram("mc_const", r"\n:Nat. S 0", lambda n: 1),
    PromiseProgram("mc_ident", r"\n:Nat. (n (+) n) (+) (S n (+) n)", lambda n: n),
    PromiseProgram("mc_double", r"\n:Nat. (add n n) (+) ((add n n) (+) (n (+) 0))",
                   lambda n: 2 * n),
)

LAS_VEGAS: tuple[PromiseProgram, ...] = (
    PromiseProgram("lv_succ", r"\n:Nat. (S (S n)) (+) 0", lambda n: n + 1),
    PromiseProgram("lv_shift", r"\n:Nat. (0 (+) S (add n 3)) (+) 0", lambda n: n + 3),
    PromiseProgram("lv_ident", r"\n:Nat. (S n (+) 0) (+) (S n (+) S n)", lambda n: n),
)

MONTE_CARLO_RAND: tuple[PromiseProgram, ...] = (
    PromiseProgram("mcr_ident",
                   r"\n:Nat. rec <n, \x:Nat. \y:Nat. rec <n, \a:Nat. \b:Nat. 0, x>, rand>",
                   lambda n: n, r"\m:Nat. 4"),
)

LAS_VEGAS_RAND: tuple[PromiseProgram, ...] = (
    PromiseProgram("lvr_ident", r"\n:Nat. rec <S n, \x:Nat. \y:Nat. 0, rand>", lambda n: n,
                   r"\m:Nat. 3"),
)

SAMPLER_CORPUS: tuple[Program, ...] = (BRANCH, GEO_FIX, DOUBLEFLIP)


def by_name(name: str) -> Program:
    for group in (ENCODING_CORPUS, PLUS_PROGRAMS, RAND_PROGRAMS,
                  (EXPO, DOUBLEFLIP_FN, EVENS_RAND)):
        for p in group:
            if p.name == name:
                return p
    raise KeyError(name)


__all__ = ["BRANCH", "DOUBLEFLIP", "DOUBLEFLIP_FN", "ENCODING_CORPUS", "EVENS_FIX",
           "EVENS_RAND", "EXPO", "GEO_FIX", "GEO_RAND", "LAS_VEGAS", "LAS_VEGAS_RAND",
           "MONTE_CARLO", "MONTE_CARLO_RAND", "PLUS_PROGRAMS", "Program", "PromiseProgram",
           "RAND_PROGRAMS", "SAMPLER_CORPUS", "by_name"]
