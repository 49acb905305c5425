"""Reduced matrix element tables and their file formats.

A table holds the SO(3)-reduced quadrupole elements of one irrep in one
basis, as dense per-(Lf, Li) blocks over the multiplicity index.  Blocks
exist for every pair with |Lf - Li| <= 2 and obey the transpose symmetry
<f||Q||i> = (-1)^(Li-Lf) <i||Q||f>.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .irreps import IrrepLabel, KLState, angular_momenta, casimir2, k_values_at

__all__ = ["BasisChoice", "ReducedMatrixTable"]

VERSION = "0.1.0"


class BasisChoice:
    """Tags naming which multiplicity resolution produced a table."""
    GTW = "GTW"
    ALT1 = "AltI"
    ALT2 = "AltII"
    ALT3 = "AltIII"
    ASYMPTOTIC = "Asymptotic"
    ROTOR = "Rotor"
    RAW = "raw"  # unlabeled intermediate (computer-chosen basis)

    ALL = (GTW, ALT1, ALT2, ALT3, ASYMPTOTIC, ROTOR)


@dataclass
class ReducedMatrixTable:
    """Reduced quadrupole elements of one irrep in one basis choice.

    `blocks[(Lf, Li)]` is the dense (mult_f x mult_i) matrix over the
    multiplicity index, present for both orderings of each L pair.  When the
    basis is canonical, the multiplicity index at L enumerates the allowed K
    values in ascending order; `labeled` is False for raw intermediate bases
    where K has no meaning yet.
    """
    irrep: IrrepLabel
    basis: str
    blocks: Dict[Tuple[int, int], np.ndarray]
    labeled: bool = True
    warnings: List[str] = field(default_factory=list)

    @property
    def Ls(self) -> List[int]:
        # may be a truncated subset of the irrep's L values (max_L builds)
        return sorted({Lf for (Lf, _) in self.blocks})

    def mult(self, L: int) -> int:
        return len(k_values_at(self.irrep, L))

    def k_labels(self, L: int) -> List[int]:
        return k_values_at(self.irrep, L)

    def get(self, f: KLState, i: KLState) -> float:
        """Entry <f||Q||i>; zero when |Lf-Li| > 2."""
        if not self.labeled:
            raise ValueError("table basis is unlabeled; no K lookup available")
        if abs(f.L - i.L) > 2:
            return 0.0
        a = self.k_labels(f.L).index(f.K)
        b = self.k_labels(i.L).index(i.K)
        return float(self.blocks[(f.L, i.L)][a, b])

    def entries(self):
        """Yield (f, i, value) once per pair, with (Li, Ki) <= (Lf, Kf)."""
        for (Lf, Li), B in sorted(self.blocks.items()):
            if Lf < Li:
                continue
            Kf_list, Ki_list = self.k_labels(Lf), self.k_labels(Li)
            for b, Ki in enumerate(Ki_list):
                for a, Kf in enumerate(Kf_list):
                    if Lf == Li and Kf < Ki:
                        continue
                    yield KLState(Kf, Lf), KLState(Ki, Li), float(B[a, b])

    def transform(self, per_L: Dict[int, np.ndarray], basis: Optional[str] = None,
                  labeled: Optional[bool] = None) -> "ReducedMatrixTable":
        """Congruence-transform all blocks by per-L orthogonal matrices."""
        new = {}
        for (Lf, Li), B in self.blocks.items():
            Of = per_L.get(Lf)
            Oi = per_L.get(Li)
            M = B if Of is None else Of.T @ B
            M = M if Oi is None else M @ Oi
            new[(Lf, Li)] = M
        return ReducedMatrixTable(self.irrep, basis or self.basis, new,
                                  labeled=self.labeled if labeled is None else labeled,
                                  warnings=list(self.warnings))

    def transpose_residual(self) -> float:
        r = 0.0
        for (Lf, Li), B in self.blocks.items():
            r = max(r, float(np.abs(B - (-1) ** (Li - Lf) * self.blocks[(Li, Lf)].T).max()))
        return r

    def sum_rule_residual(self) -> float:
        """Max relative deviation of sum_f <f||Q||i>^2 from (2Li+1)(c2 - 3Li(Li+1))."""
        c2 = casimir2(self.irrep)
        worst = 0.0
        for Li in self.Ls:
            expect = (2 * Li + 1) * (c2 - 3 * Li * (Li + 1))
            total = np.zeros(self.mult(Li))
            for Lf in self.Ls:
                if abs(Lf - Li) <= 2:
                    total += (self.blocks[(Lf, Li)] ** 2).sum(axis=0)
            worst = max(worst, float(np.abs(total - expect).max() / max(abs(expect), 1.0)))
        return worst

    # ---------------- persistence ----------------

    def to_csv(self, precision: int = 9) -> str:
        lines = ["Ki,Li,Kf,Lf,value"]
        rows = sorted(self.entries(), key=lambda e: (e[1].L, e[1].K, e[0].L, e[0].K))
        for f, i, v in rows:
            lines.append(f"{i.K},{i.L},{f.K},{f.L},{v:.{precision}g}")
        return "\n".join(lines) + "\n"

    def to_json(self, precision: int = 9) -> str:
        rows = sorted(self.entries(), key=lambda e: (e[1].L, e[1].K, e[0].L, e[0].K))
        doc = {
            "irrep": {"lambda": self.irrep.lam, "mu": self.irrep.mu},
            "basis": self.basis,
            "entries": [
                {"Ki": i.K, "Li": i.L, "Kf": f.K, "Lf": f.L,
                 "value": float(f"{v:.{precision}g}")}
                for f, i, v in rows
            ],
            "meta": {"version": VERSION, "warnings": list(self.warnings)},
        }
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_entries(cls, irrep: IrrepLabel, basis: str, values: dict,
                     warnings=()) -> "ReducedMatrixTable":
        """Build from a {(f, i): value} dict given in one direction per pair;
        the transpose direction is filled in by symmetry."""
        Ls = angular_momenta(irrep)
        blocks = {}
        for Lf in Ls:
            for Li in Ls:
                if abs(Lf - Li) <= 2:
                    blocks[(Lf, Li)] = np.zeros((len(k_values_at(irrep, Lf)),
                                                 len(k_values_at(irrep, Li))))
        for (f, i), v in values.items():
            f, i = KLState(*f), KLState(*i)
            a = k_values_at(irrep, f.L).index(f.K)
            b = k_values_at(irrep, i.L).index(i.K)
            blocks[(f.L, i.L)][a, b] = v
            blocks[(i.L, f.L)][b, a] = (-1) ** (i.L - f.L) * v
        return cls(irrep, basis, blocks, labeled=True, warnings=list(warnings))

    @classmethod
    def from_csv(cls, text: str, irrep: IrrepLabel, basis: str) -> "ReducedMatrixTable":
        values = {}
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if lines and lines[0].lower().startswith("ki"):
            lines = lines[1:]
        for ln in lines:
            Ki, Li, Kf, Lf, v = ln.split(",")
            values[((int(Kf), int(Lf)), (int(Ki), int(Li)))] = float(v)
        return cls.from_entries(irrep, basis, values)
