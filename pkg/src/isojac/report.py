"""Verification report records with deterministic serialization.

Reports serialize to JSON with sorted keys; wall-times live in a separate
``timings`` field so golden comparisons can exclude them.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA = "isojac-report/1"


@dataclass
class VerificationReport:
    family_id: object
    n: int
    d: int
    t_values: tuple = ()
    variant_tag: str | None = None
    genus: int | None = None
    slice_sizes: tuple = ()
    moduli_verdict: str | None = None
    kappa: str | None = None
    m: int | None = None
    computed_kernel: dict | None = None
    expected_kernel: dict | None = None
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def overall_pass(self):
        return bool(self.checks) and all(self.checks.values())

    def to_json_obj(self, include_timings=True):
        obj = {
            "schema": SCHEMA,
            "family": self.family_id,
            "n": self.n,
            "d": self.d,
            "t_values": list(self.t_values),
            "variant": self.variant_tag,
            "genus": self.genus,
            "slice_sizes": list(self.slice_sizes),
            "moduli_verdict": self.moduli_verdict,
            "kappa": self.kappa,
            "m": self.m,
            "computed_kernel": self.computed_kernel,
            "expected_kernel": self.expected_kernel,
            "checks": dict(sorted(self.checks.items())),
            "notes": list(self.notes),
            "overall_pass": self.overall_pass,
        }
        if include_timings:
            obj["timings"] = dict(sorted(self.timings.items()))
        return obj

    def to_json(self, include_timings=True):
        return json.dumps(self.to_json_obj(include_timings), sort_keys=True,
                          separators=(",", ":"))

    def render_text(self):
        lines = [f"family {self.family_id}  n={self.n}  d={self.d}"
                 f"  t={','.join(str(t) for t in self.t_values)}"]
        if self.variant_tag:
            lines.append(f"  variant: {self.variant_tag}")
        lines.append(f"  genus {self.genus}, slices {list(self.slice_sizes)}")
        if self.moduli_verdict:
            kap = f" (kappa = {self.kappa})" if self.kappa else ""
            lines.append(f"  moduli: {self.moduli_verdict}{kap}")
        lines.append(f"  splits multiplication by m = {self.m}")
        if self.computed_kernel:
            lines.append(f"  kernel: {self.computed_kernel['render']}")
        if self.expected_kernel:
            lines.append(f"  expected: {self.expected_kernel['render']}")
        for name, ok in sorted(self.checks.items()):
            lines.append(f"  [{'PASS' if ok else 'FAIL'}] {name}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        lines.append(f"  overall: {'PASS' if self.overall_pass else 'FAIL'}")
        return "\n".join(lines)
