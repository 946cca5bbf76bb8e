"""Experiment drivers.

Each ``run_*`` function takes an :class:`ExperimentConfig` and returns an
:class:`ExperimentResult` holding CSV tables, a flat summary and extra
artifacts (index set dumps, coefficient files, ensembles).  Nothing is
written until :meth:`ExperimentResult.write` is called.
"""
from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .. import collocation as coll
from ..eigsolve import smallest_eigs
from ..multiindex import AlgebraicWeights, generate_set, write_set
from ..polychaos import build_moment_matrices, gauss_nodes
from ..randomfield import FieldExpansion
from ..shellfem import OneD, ShellProblem, TwoD, assemble
from ..shellfem.strains import COMPONENTS
from ..spectral import (GalerkinSystem, inverse_iteration, pc_evaluate, ritz_statistics,
                        subspace_iteration, write_coefficients)
from .config import ExperimentConfig
from .fitting import fit_rate
from .tables import write_table

log = logging.getLogger(__name__)


@dataclass
class ExperimentResult:
    name: str
    tables: dict = field(default_factory=dict)     # stem -> (header, rows)
    summary: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)  # (file name, writer(path))

    def table(self, stem):
        return self.tables[stem]

    def write(self, out):
        os.makedirs(out, exist_ok=True)
        paths = []
        for stem, (header, rows) in self.tables.items():
            paths.append(write_table(os.path.join(out, f"{stem}.csv"), header, rows))
        paths.append(write_table(os.path.join(out, "summary.csv"), ["key", "value"],
                                 sorted(self.summary.items())))
        for name, writer in self.artifacts:
            path = os.path.join(out, name)
            os.makedirs(os.path.dirname(path), exist_ok=True)
            writer(path)
            paths.append(path)
        return paths


# ------------------------------------------------------------------ helpers
def index_set(cfg: ExperimentConfig, eps):
    return generate_set(AlgebraicWeights(cfg.eta_sigma), eps)


def pencil_1d(cfg, t, k, p, M, family="axial", model=None):
    prob = ShellProblem(model=model or cfg.model, t=t, nu=cfg.nu, field=FieldExpansion(family, M),
                        mode=OneD(k=int(k), elements=cfg.elements), p=p)
    return assemble(prob)


def pencil_2d(cfg, t, p, M, family="axial", model=None):
    prob = ShellProblem(model=model or cfg.model, t=t, nu=cfg.nu, field=FieldExpansion(family, M),
                        mode=TwoD(cfg.nx, cfg.ny), p=p)
    return assemble(prob)


def deterministic_eigs(pencil, S=1):
    return [pr.value for pr in smallest_eigs(pencil.stiffness(), pencil.mass, S)]


def minimizing_wavenumber(cfg, t, p, k_max=None):
    """``argmin_k lambda_min(k, t, xi = 0)`` over ``k = 0..k_max`` and the swept values."""
    k_max = cfg.k_max if k_max is None else k_max
    lams = np.array([deterministic_eigs(pencil_1d(cfg, t, k, p, 0))[0] for k in range(k_max + 1)])
    return int(np.argmin(lams)), lams


class ProfileQuadrature:
    """Gauss points and weights on the midsurface for L2 norms of one component."""

    def __init__(self, pencil, component="theta", sub=64, order=4):
        sp_ = pencil.space
        rule = gauss_nodes(order - 1)
        edges = np.linspace(sp_.x0, sp_.x1, sub + 1)
        h = edges[1] - edges[0]
        x = (edges[:-1, None] + 0.5 * h * (rule.nodes[None, :] + 1.0)).ravel()
        wx = np.tile(rule.weights * h, sub)  # normalized Gauss weights sum to one
        if sp_.dim == 1:
            self.E = pencil.evaluation_matrix(component, x)
            self.w = wx
        else:
            ny = 4 * sp_.ny
            y = np.arange(ny) * (2.0 * np.pi / ny)
            X, Y = np.meshgrid(x, y, indexing="ij")
            self.E = pencil.evaluation_matrix(component, X.ravel(), Y.ravel())
            self.w = np.outer(wx, np.full(ny, 2.0 * np.pi / ny)).ravel()

    def values(self, V):
        """Component values of a block ``(..., N)`` -> ``(..., npts)``."""
        V = np.asarray(V)
        return (self.E @ V.reshape(-1, V.shape[-1]).T).T.reshape(V.shape[:-1] + (-1,))

    def norm(self, f):
        return float(np.sqrt(np.sum(self.w * np.asarray(f) ** 2)))


def _pc_stats(coeffs):
    """PC mean and variance along axis 0."""
    c = np.asarray(coeffs)
    return c[0], np.sum(c[1:] ** 2, axis=0)


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


# -------------------------------------------------------------- calibration
def run_calibration(cfg: ExperimentConfig) -> ExperimentResult:
    """Spatial convergence of the stochastic solution versus ``p``."""
    res = ExperimentResult("calibrate")
    A = index_set(cfg, cfg.eps)
    mm = build_moment_matrices(A)
    res.artifacts.append(("index_set.txt", lambda path: write_set(A, path)))
    rows = []
    ps = list(cfg.p_values)
    by_t = {}
    for t in cfg.t_values:
        k = cfg.k if cfg.k >= 0 else minimizing_wavenumber(cfg, t, cfg.p)[0]
        stats = {}
        for p in [cfg.p_overkill] + ps:
            pen = pencil_1d(cfg, t, k, p, A.max_active_dim, cfg.family)
            sol = inverse_iteration(GalerkinSystem(pen, mm, cfg.inner_tol), tol=cfg.tol,
                                    maxiter=cfg.maxiter)
            quad = ProfileQuadrature(pen)  # same points for every p
            th = quad.values(sol.vector)
            stats[p] = sol.mean_var() + _pc_stats(th)
            log.info("calibrate t=%g k=%d p=%d E[lambda]=%.12g", t, k, p, stats[p][0])
        ref = stats[cfg.p_overkill]
        errs = []
        for p in [cfg.p_overkill] + ps:
            s = stats[p]
            e = (abs(s[0] - ref[0]), abs(s[1] - ref[1]), quad.norm(s[2] - ref[2]),
                 quad.norm(s[3] - ref[3]))
            rows.append([t, k, p, s[0], s[1], *e])
            if p != cfg.p_overkill:
                errs.append(e)
        errs = np.array(errs)
        by_t[t] = (errs, abs(ref[0]))
        res.summary[f"k[t={t:g}]"] = k
        mean_err = errs[:, 0]
        sel = [i for i, p in enumerate(ps) if p >= 3]
        res.summary[f"monotone[t={t:g}]"] = bool(np.all(np.diff(mean_err[sel]) < 0))
        try:
            fit = fit_rate(ps, mean_err, kind="loglinear", tail=cfg.fit_tail)
            res.summary[f"base[t={t:g}]"] = fit.base
        except Exception as exc:  # zero errors or too few points
            res.summary[f"base[t={t:g}]"] = float("nan")
            log.warning("no rate fit for t=%g: %s", t, exc)
    res.tables["calibration"] = (
        ["t", "k", "p", "mean_lambda", "var_lambda", "err_mean_lambda", "err_var_lambda",
         "err_mean_theta", "err_var_theta"], rows)
    if len(cfg.t_values) >= 2:
        thick, thin = max(cfg.t_values), min(cfg.t_values)
        low = [i for i, p in enumerate(ps) if p <= 4]
        (e_thin, l_thin), (e_thick, l_thick) = by_t[thin], by_t[thick]
        # lambda scales like t, so eigenvalue errors are compared relative to E[lambda*]
        rel = e_thin[low, 0] / l_thin > e_thick[low, 0] / l_thick
        theta = e_thin[low, 2] > e_thick[low, 2]
        res.summary["locking"] = bool(np.all(rel) and np.all(theta))
        res.summary["locking_abs_lambda"] = bool(np.all(e_thin[low, 0] > e_thick[low, 0]))
    return res


# --------------------------------------------------------------- validation
def _validation_row(A, gal, col, ref, quad):
    g_lam = gal.mean_var()
    c_lam = col.value_statistics()
    c_lam = (float(c_lam[0][0]), float(c_lam[1][0]))
    g_th = _pc_stats(quad.values(gal.vector))
    c_th = coll.statistics(col.grid, quad.values(col.vectors[:, 0, :]))
    r_lam, r_th = ref
    return [len(A), A.max_active_dim,
            abs(g_lam[0] - r_lam[0]), abs(c_lam[0] - r_lam[0]), abs(g_lam[0] - c_lam[0]),
            abs(g_lam[1] - r_lam[1]), abs(c_lam[1] - r_lam[1]), abs(g_lam[1] - c_lam[1]),
            quad.norm(g_th[0] - r_th[0]), quad.norm(c_th[0] - r_th[0]),
            quad.norm(g_th[1] - r_th[1]), quad.norm(c_th[1] - r_th[1])]


VALIDATION_HEADER = ["P", "M_A", "gal_err_mean_lambda", "col_err_mean_lambda", "diff_mean_lambda",
                     "gal_err_var_lambda", "col_err_var_lambda", "diff_var_lambda",
                     "gal_err_mean_theta", "col_err_mean_theta", "gal_err_var_theta",
                     "col_err_var_theta"]


def run_validation_1d(cfg: ExperimentConfig) -> ExperimentResult:
    """Stochastic convergence of both solvers against the Galerkin overkill solution."""
    res = ExperimentResult("validate-1d")
    A_star = index_set(cfg, cfg.eps)
    k = cfg.k if cfg.k >= 0 else minimizing_wavenumber(cfg, cfg.t, cfg.p)[0]
    pen = pencil_1d(cfg, cfg.t, k, cfg.p, A_star.max_active_dim, cfg.family)
    quad = ProfileQuadrature(pen)
    det = deterministic_eigs(pen, 2)
    res.summary.update({"k": k, "N": pen.N, "lambda1_det": det[0], "lambda2_det": det[1],
                        "gap_ratio_det": det[0] / det[1]})
    ref_vec = coll.reference_basis(pen, 1)
    cache = coll.EnsembleCache(pen, 2)  # two pairs per point feed the contraction bound

    sol_star, t_gal = _timed(inverse_iteration,
                             GalerkinSystem(pen, build_moment_matrices(A_star), cfg.inner_tol),
                             tol=cfg.tol, maxiter=cfg.maxiter)
    ref = (sol_star.mean_var(), _pc_stats(quad.values(sol_star.vector)))
    grid_star = coll.build_grid(A_star)
    col_star, t_col = _timed(coll.collocate_simple, pen, grid_star, ref_vec[0], cache)
    res.summary.update({"P_overkill": len(A_star), "M_A_overkill": A_star.max_active_dim,
                        "grid_points_overkill": grid_star.size, "seconds_galerkin_overkill": t_gal,
                        "seconds_collocation_overkill": t_col})

    rows = []
    for eps in sorted(set(cfg.eps_values) | {cfg.eps}, reverse=True):
        A = index_set(cfg, eps)
        if eps == cfg.eps:
            gal, col = sol_star, col_star
        else:
            gal = inverse_iteration(GalerkinSystem(pen, build_moment_matrices(A), cfg.inner_tol),
                                    tol=cfg.tol, maxiter=cfg.maxiter)
            col = coll.collocate_simple(pen, coll.build_grid(A), ref_vec[0], cache)
        rows.append([eps] + _validation_row(A, gal, col, ref, quad))
        log.info("validate-1d eps=%g P=%d", eps, len(A))
    res.tables["validation"] = (["eps"] + VALIDATION_HEADER, rows)

    sweep = [r for r in rows if r[0] != cfg.eps]
    P = [r[1] for r in sweep]
    for name, col_idx in (("galerkin", 3), ("collocation", 4)):
        fit = fit_rate(P, [r[col_idx] for r in sweep], "loglog", tail=cfg.fit_tail)
        res.summary[f"{name}_mean_exponent"] = fit.exponent
    res.summary["agree_mean"] = bool(all(r[5] < min(r[3], r[4]) for r in sweep))
    res.summary["agree_var"] = bool(all(r[8] < min(r[6], r[7]) for r in sweep))

    # contraction of the overkill iteration against the sampled gap bound
    ratios = sol_star.report.ratios()
    vals = np.array([[pr.value for pr in cache.solve(key, pt)]
                     for key, pt in zip(grid_star.keys, grid_star.points)])
    theta = float(vals[:, 0].max() / vals[:, 1].min())
    res.summary.update({"contraction_tail": float(np.mean(ratios[-3:])),
                        "contraction_max_tail": float(np.max(ratios[-3:])),
                        "sampled_gap_bound": theta, "iterations": sol_star.report.steps})
    res.tables["iteration"] = (["step", "delta", "ratio"],
                               [[i + 1, d, ratios[i - 1] if i else float("nan")]
                                for i, d in enumerate(sol_star.report.deltas)])
    res.artifacts += [
        ("index_set.txt", lambda path: write_set(A_star, path)),
        ("coefficients_lambda.txt",
         lambda path: write_coefficients(path, A_star, sol_star.eigenvalue[:, None])),
        ("coefficients_vector.txt", lambda path: write_coefficients(path, A_star, sol_star.vector)),
        ("ensemble.csv", lambda path: col_star.write_ensemble(path)),
    ]
    if cfg.export_pencil:
        res.artifacts.append(("pencil/README", lambda path: _export(pen, path)))
    return res


def _export(pen, path):
    files = pen.write_matrix_market(os.path.dirname(path))
    with open(path, "w") as fh:
        fh.write("K<m>.mtx: stiffness terms, M.mtx: mass\n" + "\n".join(map(os.path.basename, files)))


def stochastic_2d(cfg, t, S, eps_values, family="axial", model=None, solver=None):
    """Convergence of the 2D subspace solvers for the first basis function and Ritz values."""
    solver = solver or cfg.solver
    A_star = index_set(cfg, cfg.eps)
    pen = pencil_2d(cfg, t, cfg.p, A_star.max_active_dim, family, model)
    quad = ProfileQuadrature(pen)
    ref_basis = coll.reference_basis(pen, S)
    cache = coll.EnsembleCache(pen, S)
    out = {}
    for eps in sorted(set(eps_values) | {cfg.eps}, reverse=True):
        A = index_set(cfg, eps)
        grid = coll.build_grid(A)
        entry = {"P": len(A), "M_A": A.max_active_dim}
        if solver in ("galerkin", "both"):
            system = GalerkinSystem(pen, build_moment_matrices(A), cfg.inner_tol)
            sub, _ = subspace_iteration(system, S, ref_basis, tol=cfg.tol, maxiter=cfg.maxiter)
            mean, var, _ = ritz_statistics(pen, sub, grid)
            entry["galerkin"] = (mean, var) + _pc_stats(quad.values(sub.basis[0]))
            entry["report"] = sub.report
        if solver in ("collocation", "both"):
            col = coll.collocate_subspace(pen, grid, S, ref_basis, cache)
            mean, var = col.value_statistics()
            entry["collocation"] = (mean, var) + coll.statistics(
                grid, quad.values(col.vectors[:, 0, :]))
        out[eps] = entry
        log.info("2D t=%g eps=%g P=%d", t, eps, len(A))
    return pen, quad, out


def _table_2d(cfg, quad, out, S):
    ref_key = "galerkin" if "galerkin" in out[cfg.eps] else "collocation"
    ref = out[cfg.eps][ref_key]
    header = ["eps", "P", "M_A"]
    rows = []
    methods = [m for m in ("galerkin", "collocation") if m in out[cfg.eps]]
    for m in methods:
        header += [f"{m}_err_mean_lambda{i + 1}" for i in range(S)]
        header += [f"{m}_err_var_lambda{i + 1}" for i in range(S)]
        header += [f"{m}_err_mean_theta", f"{m}_err_var_theta"]
    for eps, e in out.items():
        row = [eps, e["P"], e["M_A"]]
        for m in methods:
            mean, var, th_m, th_v = e[m]
            row += list(np.abs(mean - ref[0])) + list(np.abs(var - ref[1]))
            row += [quad.norm(th_m - ref[2]), quad.norm(th_v - ref[3])]
        rows.append(row)
    return header, rows


def run_validation_2d(cfg: ExperimentConfig) -> ExperimentResult:
    res = ExperimentResult("validate-2d")
    pen, quad, out = stochastic_2d(cfg, cfg.t, cfg.S, cfg.eps_values, cfg.family)
    res.tables["validation"] = _table_2d(cfg, quad, out, cfg.S)
    det = deterministic_eigs(pen, 3)
    k = cfg.k if cfg.k >= 0 else 6
    one_d = deterministic_eigs(pencil_1d(cfg, cfg.t, k, cfg.p, 0), 1)[0]
    res.summary.update({"N": pen.N, "lambda1_det": det[0], "lambda2_det": det[1],
                        "lambda3_det": det[2], "gap_ratio_23": det[1] / det[2],
                        "lambda_1d_k": one_d, "k_1d": k,
                        "double_rel_diff": max(abs(det[0] - one_d), abs(det[1] - one_d)) / one_d})
    return res


# ----------------------------------------------------------------- crossing
def slice_points(cfg, ndim):
    """``(xi_1, xi_2)`` tensor grid with the remaining coordinates fixed."""
    g = np.linspace(-1.0, 1.0, cfg.slice_points)
    X1, X2 = np.meshgrid(g, g, indexing="ij")
    xi = np.full((X1.size, max(ndim, 2)), cfg.slice_rest)
    xi[:, 0], xi[:, 1] = X1.ravel(), X2.ravel()
    return xi[:, :ndim] if ndim >= 2 else xi


def run_crossing(cfg: ExperimentConfig) -> ExperimentResult:
    res = ExperimentResult("crossing")
    A = index_set(cfg, cfg.eps)
    mm = build_moment_matrices(A)
    xi = slice_points(cfg, A.max_active_dim)
    k1, k2 = cfg.wavenumbers
    for label, t in (("", cfg.t), ("control_", cfg.control_t)):
        lam = {}
        for k in (k1, k2):
            pen = pencil_1d(cfg, t, k, cfg.p, A.max_active_dim, cfg.family)
            sol = inverse_iteration(GalerkinSystem(pen, mm, cfg.inner_tol), tol=cfg.tol,
                                    maxiter=cfg.maxiter)
            lam[k] = (pc_evaluate(A, sol.eigenvalue, xi), float(sol.eigenvalue @ _basis_at_zero(A)))
        diff = lam[k1][0] - lam[k2][0]
        res.tables[f"{label}surfaces"] = (
            ["xi1", "xi2", f"lambda_k{k1}", f"lambda_k{k2}", "difference"],
            [[xi[i, 0], xi[i, 1], lam[k1][0][i], lam[k2][0][i], diff[i]] for i in range(len(xi))])
        crossing = bool(diff.min() < 0.0 < diff.max())
        on_line = np.isclose(xi[:, 0], cfg.slice_rest)
        res.summary.update({
            f"{label}t": t,
            f"{label}crossing": crossing,
            f"{label}crossing_on_xi2_line": bool(diff[on_line].min() < 0.0 < diff[on_line].max()),
            f"{label}min_difference": float(diff.min()),
            f"{label}max_difference": float(diff.max()),
            f"{label}ratio_at_zero": max(lam[k1][1], lam[k2][1]) / min(lam[k1][1], lam[k2][1]),
        })
        if not crossing and not label:
            log.warning("t=%g: no crossing detected", t)
    if cfg.slow:
        pen, quad, out = stochastic_2d(cfg.with_(eps=5e-4), cfg.t, cfg.S,
                                       (1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3), cfg.family)
        res.tables["convergence_2d"] = _table_2d(cfg.with_(eps=5e-4), quad, out, cfg.S)
    return res


def _basis_at_zero(A):
    from ..polychaos import evaluate_basis
    return evaluate_basis(A, np.zeros((1, max(A.max_active_dim, 1))))[0]


# -------------------------------------------------------------- asymptotics
def run_asymptotics(cfg: ExperimentConfig) -> ExperimentResult:
    res = ExperimentResult("asymptotics")
    A = index_set(cfg, cfg.eps)
    mm = build_moment_matrices(A)
    rows = []
    for t in sorted(cfg.t_values):
        k, lams = minimizing_wavenumber(cfg, t, cfg.p)
        pen = pencil_1d(cfg, t, k, cfg.p, A.max_active_dim, cfg.family)
        sol = inverse_iteration(GalerkinSystem(pen, mm, cfg.inner_tol), tol=cfg.tol,
                                maxiter=cfg.maxiter)
        mean, var = sol.mean_var()
        rows.append([t, k, lams[k], mean, np.sqrt(var)])
        log.info("asymptotics t=%g k*=%d E=%.6g", t, k, mean)
    res.tables["asymptotics"] = (["t", "k", "lambda_det", "mean_lambda", "sd_lambda"], rows)
    t = np.array([r[0] for r in rows])
    ks = np.array([r[1] for r in rows])
    res.summary["mean_slope"] = fit_rate(t, [r[3] for r in rows], "loglog").exponent
    res.summary["sd_slope"] = fit_rate(t, [r[4] for r in rows], "loglog").exponent
    res.summary["k_nonincreasing"] = bool(np.all(np.diff(ks) <= 0))
    C = float(np.exp(np.mean(np.log(ks) + 0.25 * np.log(t))))
    res.summary["k_prefactor"] = C
    res.summary["k_max_deviation"] = float(np.max(np.abs(ks - C * t ** -0.25)))
    return res


# ---------------------------------------------------------------- general 2D
def _field_on_grid(pen, vec, X, Y):
    out = []
    for c in COMPONENTS:
        E = pen.evaluation_matrix(c, X.ravel(), Y.ravel())
        out.append(np.asarray(E @ vec).reshape(X.shape))
    return out


def _separation(F):
    s = np.linalg.svd(F, compute_uv=False)
    return float(s[1] / s[0]) if s[0] > 0 else 0.0


def run_general2d(cfg: ExperimentConfig) -> ExperimentResult:
    res = ExperimentResult("general-2d")
    A = index_set(cfg, cfg.eps)
    mm = build_moment_matrices(A)
    means = {}
    for model in cfg.models:
        for family in (cfg.family, "axial") if cfg.family != "axial" else ("axial",):
            pen = pencil_2d(cfg, cfg.t, cfg.p, A.max_active_dim, family, model)
            sp_ = pen.space
            xs = np.linspace(sp_.x0, sp_.x1, cfg.grid_x)
            ys = np.linspace(0.0, 2.0 * np.pi, cfg.grid_y)
            X, Y = np.meshgrid(xs, ys, indexing="ij")
            ref = coll.reference_basis(pen, cfg.S)
            if cfg.solver == "collocation":
                col = coll.collocate_subspace(pen, coll.build_grid(A), cfg.S, ref)
                vals = np.array([_field_on_grid(pen, v, X, Y) for v in col.vectors[:, 0, :]])
                vm_f, vv_f = (list(s) for s in coll.statistics(col.grid, vals))
            else:
                sub, _ = subspace_iteration(GalerkinSystem(pen, mm, cfg.inner_tol), cfg.S, ref,
                                            tol=cfg.tol, maxiter=cfg.maxiter)
                coeff = sub.basis[0]  # (P, N)
                fields = [_field_on_grid(pen, c, X, Y) for c in coeff]
                vm_f = fields[0]
                vv_f = [sum((f[i] ** 2 for f in fields[1:]), np.zeros_like(vm_f[i]))
                        for i in range(len(COMPONENTS))]
            tag = model if family == cfg.family else f"{model}_{family}"
            rows = []
            for i in range(X.size):
                ix, iy = np.unravel_index(i, X.shape)
                rows.append([X[ix, iy], Y[ix, iy]] + [f[ix, iy] for f in vm_f]
                            + [f[ix, iy] for f in vv_f])
            res.tables[f"fields_{tag}"] = (
                ["x", "y"] + [f"mean_{c}" for c in COMPONENTS] + [f"var_{c}" for c in COMPONENTS],
                rows)
            res.summary[f"min_variance[{tag}]"] = float(min(f.min() for f in vv_f))
            res.summary[f"separation_var_w[{tag}]"] = _separation(vv_f[COMPONENTS.index("w")])
            if family == cfg.family:
                means[model] = np.array(vm_f)
    if len(means) == 2:
        a, b = means.values()
        res.summary["model_difference"] = float(np.linalg.norm(a - b) / np.linalg.norm(a))
    return res


RUNNERS = {
    "calibrate": run_calibration,
    "validate-1d": run_validation_1d,
    "validate-2d": run_validation_2d,
    "crossing": run_crossing,
    "asymptotics": run_asymptotics,
    "general-2d": run_general2d,
}


def run(cfg: ExperimentConfig) -> ExperimentResult:
    return RUNNERS[cfg.experiment](cfg)
