"""Experiment configuration: JSON schema, validation and stable hashing."""
from dataclasses import dataclass, field
import hashlib
import json

from .dirichlet_solver import BoundaryData
from .errors import UnderResolvedDataError
from .geometry import HolePlacement, discretize, make_curve
from .lattice_green import EwaldParams, get_evaluator


@dataclass(frozen=True)
class ExperimentConfig:
    curve: object
    w: tuple
    data: BoundaryData
    N: int
    ewald: EwaldParams = field(default_factory=EwaldParams)
    outputs: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(float(v) for v in self.w))
        # a tiny admissible placement validates w against the shape
        HolePlacement(self.curve, self.w, 1e-6)
        discretize(self.N)
        if self.data.degree > self.N // 4:
            raise UnderResolvedDataError(
                f"boundary data of degree {self.data.degree} needs N >= {4 * self.data.degree}"
            )

    @classmethod
    def from_dict(cls, raw):
        try:
            c = dict(raw["curve"])
            kind = c.pop("kind")
            g = raw.get("g", {})
            e = raw.get("ewald", {})
            ewald = EwaldParams(
                eta=float(e.get("eta", 3.0)),
                kmax=int(e.get("kmax", 12)),
                rmax=int(e.get("rmax", 2)),
                target_abs_tol=float(e.get("tol", 1e-10)),
            )
            return cls(
                curve=make_curve(kind, **c),
                w=tuple(raw["w"]),
                data=BoundaryData(g.get("a0", 0.0), g.get("cos", ()), g.get("sin", ())),
                N=int(raw["N"]),
                ewald=ewald,
                outputs=dict(raw.get("outputs", {})),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed config: {exc!r}") from exc

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self, outputs=True):
        out = {
            "curve": self.curve.to_dict(),
            "w": list(self.w),
            "g": self.data.to_dict(),
            "N": self.N,
            "ewald": {
                "eta": self.ewald.eta,
                "kmax": self.ewald.kmax,
                "rmax": self.ewald.rmax,
                "tol": self.ewald.target_abs_tol,
            },
        }
        if outputs and self.outputs:
            out["outputs"] = dict(self.outputs)
        return out

    def dumps(self, outputs=True):
        return json.dumps(self.to_dict(outputs), sort_keys=True, separators=(",", ":"))

    @property
    def hash(self):
        """Digest of the physical setup (output paths excluded)."""
        return hashlib.sha256(self.dumps(outputs=False).encode()).hexdigest()[:16]

    @property
    def discretization(self):
        return discretize(self.N)

    @property
    def green(self):
        return get_evaluator(self.ewald)

    def placement(self, eps):
        return HolePlacement(self.curve, self.w, eps)
