"""Profile tables, group sizes and plot-ready coordinate tables.

Observation ids and profile numbers in emitted files are 1-based; the
library API uses 0-based indices throughout.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from archetypal.core import InvalidInputError, check_data
from archetypal.io import format_matrix, write_json, write_text
from archetypal.simulation import binarize

__all__ = [
    "AnalysisReport",
    "model_record",
    "build_report",
    "percent_positive",
    "pairwise_hamming",
    "ternary_coords",
    "star_table",
    "emit_report",
]

OBJECTIVES = {
    "aa": "rss",
    "faa": "rss",
    "ada": "rss",
    "fada": "rss",
    "paa": "loglik",
    "pam": "cost",
    "kmeans": "wcss",
}


def percent_positive(profile):
    """Share of ones in a binary profile, in percent, one decimal."""
    profile = np.asarray(profile)
    return round(100.0 * float(profile.sum()) / profile.size, 1)


def pairwise_hamming(P):
    P = np.asarray(P)
    return np.count_nonzero(P[:, None, :] != P[None, :, :], axis=2)


def ternary_coords(alpha):
    """Barycentric embedding of 3-part mixtures in the plane.

    Vertices sit at (0, 0), (1, 0) and (1/2, sqrt(3)/2).
    """
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.ndim != 2 or alpha.shape[1] != 3:
        raise InvalidInputError("ternary coordinates need exactly three mixture columns")
    vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]])
    return alpha @ vertices


def star_table(alpha, ids=None):
    """One CSV line per observation: id followed by its alphas (6 decimals)."""
    alpha = np.atleast_2d(np.asarray(alpha, dtype=np.float64))
    ids = range(1, alpha.shape[0] + 1) if ids is None else ids
    return format_matrix(alpha, digits=6, row_ids=list(ids)).splitlines()


def model_record(model, X=None):
    """Plain-dict view of any fitted model, JSON-serializable.

    PAM models only store medoid indices, so ``X`` is required for them.
    """
    method = getattr(model, "method", None)
    if method not in OBJECTIVES:
        raise InvalidInputError(f"unsupported model type {type(model).__name__}")
    rec = {"method": method, "k": int(model.k)}
    if method in ("aa", "faa"):
        rec["profiles"] = model.Z
        rec["alpha"] = model.alpha
        rec["beta"] = model.beta
        rec["objective"] = model.rss
    elif method in ("ada", "fada"):
        rec["profiles"] = model.profiles
        rec["representatives"] = list(model.indices)
        rec["alpha"] = model.alpha
        rec["objective"] = model.rss
        rec["init_label"] = model.init_label
    elif method == "paa":
        rec["profiles"] = model.Zp
        rec["alpha"] = model.alpha
        rec["beta"] = model.beta
        rec["objective"] = model.loglik
    elif method == "pam":
        if X is None:
            raise InvalidInputError("X is required to report PAM medoid profiles")
        rec["profiles"] = check_data(X)[list(model.medoid_indices)]
        rec["representatives"] = list(model.medoid_indices)
        rec["labels"] = model.labels
        rec["objective"] = model.total_cost
    else:
        rec["profiles"] = model.centroids
        rec["labels"] = model.labels
        rec["objective"] = model.wcss
    return {key: _plain(value) for key, value in rec.items()}


def _plain(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


@dataclass
class AnalysisReport:
    method: str
    k: int
    profiles: np.ndarray
    binary_profiles: np.ndarray
    profiles_are_binary: bool
    percent_positive: list
    hamming: np.ndarray
    objective_name: str
    objective: float
    group_sizes: list
    labels: np.ndarray
    representatives: list = None
    alpha: np.ndarray = None

    def summary(self):
        """JSON-ready summary; the key names are part of the CLI contract."""
        return {
            "method": self.method,
            "k": self.k,
            "objective": {"name": self.objective_name, "value": self.objective},
            "profiles_binary": self.profiles_are_binary,
            "representatives": (
                None if self.representatives is None
                else [i + 1 for i in self.representatives]
            ),
            "percent_positive": self.percent_positive,
            "hamming": self.hamming.tolist(),
            "group_sizes": self.group_sizes,
            "profiles": self.profiles.tolist(),
            "binarized_profiles": self.binary_profiles.astype(int).tolist(),
        }


def build_report(record):
    """Assemble the profile report from a ``model_record`` dict."""
    profiles = np.asarray(record["profiles"], dtype=np.float64)
    is_binary = bool(np.all((profiles == 0) | (profiles == 1)))
    bprof = profiles if is_binary else binarize(profiles, 0.5)
    if record.get("alpha") is not None:
        alpha = np.asarray(record["alpha"], dtype=np.float64)
        labels = np.argmax(alpha, axis=1)
    else:
        alpha = None
        labels = np.asarray(record["labels"], dtype=np.int64)
    k = int(record["k"])
    sizes = np.bincount(labels, minlength=k)
    return AnalysisReport(
        method=record["method"],
        k=k,
        profiles=profiles,
        binary_profiles=bprof,
        profiles_are_binary=is_binary,
        percent_positive=[percent_positive(p) for p in bprof],
        hamming=pairwise_hamming(bprof),
        objective_name=OBJECTIVES[record["method"]],
        objective=float(record["objective"]),
        group_sizes=[int(s) for s in sizes],
        labels=labels,
        representatives=record.get("representatives"),
        alpha=alpha,
    )


def emit_report(report, out_dir, formats=("csv", "json")):
    """Write the report files into ``out_dir`` and return their paths.

    csv: ``profiles.csv`` (raw profiles plus binarized rows when the raw
    ones are not binary), ``hamming.csv``, ``groups.csv`` and, when mixture
    weights exist, ``star.csv`` and for k = 3 ``ternary.csv``.
    json: ``report.json`` with the ``AnalysisReport.summary`` keys.
    """
    out_dir = Path(out_dir)
    written = []
    m = report.profiles.shape[1]
    if "csv" in formats:
        header = ["profile", "kind", "representative"] + [f"v{h}" for h in range(1, m + 1)] + [
            "percent_positive"
        ]
        lines = [",".join(header)]
        kinds = [("raw", report.profiles)]
        if not report.profiles_are_binary:
            kinds.append(("binarized", report.binary_profiles))
        for kind, P in kinds:
            # percent-positive only describes binary rows
            with_pct = kind == "binarized" or report.profiles_are_binary
            for j, row in enumerate(P):
                rep = "" if report.representatives is None else str(report.representatives[j] + 1)
                pct = f"{report.percent_positive[j]:.1f}" if with_pct else ""
                lines.append(",".join([str(j + 1), kind, rep, format_matrix(row).strip(), pct]))
        written.append(_put(out_dir / "profiles.csv", "\n".join(lines) + "\n"))

        ids = [str(j) for j in range(1, report.k + 1)]
        written.append(
            _put(out_dir / "hamming.csv", format_matrix(report.hamming, header=["profile"] + ids, row_ids=ids))
        )
        groups = "profile,size\n" + "".join(
            f"{j + 1},{s}\n" for j, s in enumerate(report.group_sizes)
        )
        written.append(_put(out_dir / "groups.csv", groups))
        if report.alpha is not None:
            star = ["id," + ",".join(f"alpha{j}" for j in range(1, report.k + 1))]
            star += star_table(report.alpha)
            written.append(_put(out_dir / "star.csv", "\n".join(star) + "\n"))
            if report.k == 3:
                xy = ternary_coords(report.alpha)
                written.append(
                    _put(out_dir / "ternary.csv", format_matrix(
                        xy, header=["id", "x", "y"], digits=6,
                        row_ids=list(range(1, xy.shape[0] + 1))))
                )
    if "json" in formats:
        path = out_dir / "report.json"
        write_json(path, report.summary())
        written.append(path)
    return written


def _put(path, text):
    write_text(path, text)
    return path
