"""Adams operations and exterior powers on character rings.

Exterior powers are obtained from Adams operations through Newton's identity
    k * lambda^k = sum_{i=1..k} (-1)^(i-1) psi^i * lambda^(k-i)
which needs only polynomially many products.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .characters import (BudgetExceeded, CharacterError, FormalCharacter,
                         budget, decompose, irreducible_character)


def adams(x, n):
    """psi^n: every weight is scaled by n."""
    if n < 1:
        raise CharacterError("Adams operation needs n >= 1")
    out = {}
    for w, m in x.terms.items():
        v = tuple(n * c for c in w)
        out[v] = out.get(v, 0) + m
    return FormalCharacter(x.datum, out)


def _scale_add(acc, x, coeff):
    for w, m in x.items():
        acc[w] = acc.get(w, 0) + coeff * m


def _mul(a, b, limit):
    if len(a) * len(b) > limit:
        raise BudgetExceeded("bound exceeded")
    out = {}
    for w1, m1 in a.items():
        for w2, m2 in b.items():
            w = tuple(p + q for p, q in zip(w1, w2))
            out[w] = out.get(w, 0) + m1 * m2
    return {w: m for w, m in out.items() if m}


def exterior_powers(x, k_max, limit=None):
    """[lambda^0(x), ..., lambda^k_max(x)] via Newton's identity."""
    limit = budget() * 10 if limit is None else limit
    zero = tuple([0] * x.datum.rank)
    lam = [{zero: Fraction(1)}]
    psis = [None] + [adams(x, i).terms for i in range(1, k_max + 1)]
    for k in range(1, k_max + 1):
        acc = {}
        for i in range(1, k + 1):
            sign = 1 if i % 2 else -1
            _scale_add(acc, _mul(psis[i], lam[k - i], limit), sign)
        lam.append({w: Fraction(m, k) for w, m in acc.items() if m})
    out = []
    for terms in lam:
        for m in terms.values():
            if m.denominator != 1:
                raise CharacterError("non-integral exterior power (internal error)")
        out.append(FormalCharacter(x.datum, {w: int(m) for w, m in terms.items()}))
    return out


def exterior_power(x, k):
    if k < 0:
        raise CharacterError("k must be nonnegative")
    return exterior_powers(x, k)[k]


def adams_from_lambdas(lams, n):
    """Recover psi^n from lambda^0..lambda^n with the same Newton identity."""
    datum = lams[0].datum
    psi = [None]
    for k in range(1, n + 1):
        # psi^k = (-1)^(k-1) [k lambda^k - sum_{i<k} (-1)^(i-1) psi^i lambda^(k-i)]
        acc = lams[k] * k
        for i in range(1, k):
            term = psi[i] * lams[k - i]
            acc = acc - term if i % 2 else acc + term
        psi.append(acc if k % 2 else -acc)
    return psi[n] if n else FormalCharacter.unit(datum)


@dataclass(frozen=True)
class LambdaTableEntry:
    op: str          # "lambda" or "psi"
    k: int
    weight: tuple
    decomposition: tuple

    @property
    def key(self):
        return f"{self.op}:{self.k}:{','.join(map(str, self.weight))}"

    def to_json(self):
        return [{"weight": list(w), "mult": m} for w, m in self.decomposition]


def bounded_dominant_weights(datum, bound):
    return sorted(product(range(bound + 1), repeat=datum.rank),
                  key=lambda w: (sum(w), w))


def lambda_table(datum, bound, k_max=0, n_max=0):
    """Decompositions of lambda^k and psi^n of every irreducible with
    coordinates <= bound, k = 1..k_max and n = 1..n_max."""
    if bound < 0 or k_max < 0 or n_max < 0:
        raise CharacterError("bound, k_max and n_max must be nonnegative")
    entries = []
    limit = budget()
    for w in bounded_dominant_weights(datum, bound):
        chi = irreducible_character(datum, w)
        try:
            if k_max:
                if len(chi.terms) ** 2 * k_max > limit * 10:
                    raise BudgetExceeded("bound exceeded")
                lams = exterior_powers(chi, k_max)
                for k in range(1, k_max + 1):
                    entries.append(LambdaTableEntry("lambda", k, w, tuple(decompose(lams[k]))))
            for n in range(1, n_max + 1):
                entries.append(LambdaTableEntry("psi", n, w, tuple(decompose(adams(chi, n)))))
        except BudgetExceeded as exc:
            raise BudgetExceeded(f"enumeration budget exceeded at weight {w}; "
                                 f"{len(entries)} entries computed") from exc
    return entries


def lambda_table_json(entries):
    return {e.key: e.to_json() for e in entries}
