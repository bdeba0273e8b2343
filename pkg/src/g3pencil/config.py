"""JSON configuration schema for pencil definitions.

A document looks like::

    {
      "curve": "fresnel-helix",                // or {"f": "...", "g": "..."}
      "marching_scale": {
        "synthesis": {"lambda": 0.5, "sigma": "1", "sign": "+",
                       "l": "1", "m": "1", "n": "-1"}
        // or {"direct": {"alpha": ..., "beta": ..., "gamma": ...}}
        // or {"product": {"l", "m", "n", "X", "Y", "Z"}}
      },
      "control": {"a": 1, "b": 1, "c": 1},     // optional, product form only
      "domain": {"s_min": 0.1, "s_max": 6.28, "v_min": 0, "v_max": 5, "v0": 0},
      "grid": {"ns": 200, "nv": 50},
      "verify": {"mode": "analytic", "tol": 1e-9, "samples": 200}   // optional
    }

Exactly one marching-scale block must be present.  All expression strings
use the grammar documented in :mod:`g3pencil.exprjet` and are parsed
eagerly so errors surface at load time.  Explicit curves may carry
optional "kappa" and "tau" closed forms, which synthesis requires.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .curve import BUILTIN_CURVES, CurveSpec
from .errors import SchemaError
from .exprjet import Expr, eval_expr, parse, to_source
from .pencil import (
    ControlCoefficients,
    DTypeSpec,
    MarchingScale,
    ParamDomain,
    PencilSpec,
    apply_control_coefficients,
    product_marching_scale,
    synthesize_product_form,
)

_MS_VANISH_TOL = 1e-12


@dataclass(frozen=True)
class CurveConfig:
    builtin: str | None = None
    f: Expr | None = None
    g: Expr | None = None
    kappa: Expr | None = None
    tau: Expr | None = None


@dataclass(frozen=True)
class DirectMS:
    alpha: Expr
    beta: Expr
    gamma: Expr


@dataclass(frozen=True)
class ProductMS:
    l: Expr
    m: Expr
    n: Expr
    x: Expr
    y: Expr
    z: Expr


@dataclass(frozen=True)
class SynthesisMS:
    lam: float
    sigma: Expr
    sign: float
    l: Expr
    m: Expr
    n: Expr


@dataclass(frozen=True)
class GridSpec:
    ns: int
    nv: int


@dataclass(frozen=True)
class VerifySpec:
    mode: str = "analytic"
    tol: float | None = None
    samples: int = 200


@dataclass(frozen=True)
class PencilConfig:
    curve: CurveConfig
    marching: DirectMS | ProductMS | SynthesisMS
    control: ControlCoefficients | None
    domain: ParamDomain
    grid: GridSpec
    verify: VerifySpec


def _need(doc: dict, key: str, path: str):
    if key not in doc:
        raise SchemaError(f"{path}.{key}", "missing required entry")
    return doc[key]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, f"expected a number, got {type(value).__name__}")
    return float(value)


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"expected an integer, got {type(value).__name__}")
    return value


def _expr(value, path: str) -> Expr:
    if not isinstance(value, str):
        raise SchemaError(path, f"expected an expression string, got {type(value).__name__}")
    return parse(value)


def _curve_config(doc, path: str) -> CurveConfig:
    if isinstance(doc, str):
        if doc not in BUILTIN_CURVES:
            raise SchemaError(path, f"unknown builtin curve {doc!r}")
        return CurveConfig(builtin=doc)
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected a builtin name or an {f, g} object")
    f = _expr(_need(doc, "f", path), f"{path}.f")
    g = _expr(_need(doc, "g", path), f"{path}.g")
    kappa = _expr(doc["kappa"], f"{path}.kappa") if "kappa" in doc else None
    tau = _expr(doc["tau"], f"{path}.tau") if "tau" in doc else None
    return CurveConfig(f=f, g=g, kappa=kappa, tau=tau)


def _marching_config(doc, path: str):
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object")
    blocks = [k for k in ("direct", "product", "synthesis") if k in doc]
    if len(blocks) != 1:
        raise SchemaError(
            path, f"exactly one of direct, product, synthesis required, found {blocks}"
        )
    kind = blocks[0]
    block = doc[kind]
    if not isinstance(block, dict):
        raise SchemaError(f"{path}.{kind}", "expected an object")
    p = f"{path}.{kind}"
    if kind == "direct":
        return DirectMS(
            alpha=_expr(_need(block, "alpha", p), f"{p}.alpha"),
            beta=_expr(_need(block, "beta", p), f"{p}.beta"),
            gamma=_expr(_need(block, "gamma", p), f"{p}.gamma"),
        )
    if kind == "product":
        return ProductMS(
            l=_expr(_need(block, "l", p), f"{p}.l"),
            m=_expr(_need(block, "m", p), f"{p}.m"),
            n=_expr(_need(block, "n", p), f"{p}.n"),
            x=_expr(_need(block, "X", p), f"{p}.X"),
            y=_expr(_need(block, "Y", p), f"{p}.Y"),
            z=_expr(_need(block, "Z", p), f"{p}.Z"),
        )
    sign_text = block.get("sign", "+")
    if sign_text not in ("+", "-"):
        raise SchemaError(f"{p}.sign", "expected '+' or '-'")
    return SynthesisMS(
        lam=_number(_need(block, "lambda", p), f"{p}.lambda"),
        sigma=_expr(_need(block, "sigma", p), f"{p}.sigma"),
        sign=1.0 if sign_text == "+" else -1.0,
        l=_expr(_need(block, "l", p), f"{p}.l"),
        m=_expr(_need(block, "m", p), f"{p}.m"),
        n=_expr(_need(block, "n", p), f"{p}.n"),
    )


def config_from_dict(doc: dict, path: str = "$") -> PencilConfig:
    if not isinstance(doc, dict):
        raise SchemaError(path, "top level must be an object")
    curve = _curve_config(_need(doc, "curve", path), f"{path}.curve")
    marching = _marching_config(_need(doc, "marching_scale", path), f"{path}.marching_scale")
    control = None
    if "control" in doc:
        cdoc = doc["control"]
        if not isinstance(cdoc, dict):
            raise SchemaError(f"{path}.control", "expected an object")
        control = ControlCoefficients(
            a=_number(cdoc.get("a", 1.0), f"{path}.control.a"),
            b=_number(cdoc.get("b", 1.0), f"{path}.control.b"),
            c=_number(cdoc.get("c", 1.0), f"{path}.control.c"),
        )
    ddoc = _need(doc, "domain", path)
    if not isinstance(ddoc, dict):
        raise SchemaError(f"{path}.domain", "expected an object")
    try:
        domain = ParamDomain(
            s_min=_number(_need(ddoc, "s_min", f"{path}.domain"), f"{path}.domain.s_min"),
            s_max=_number(_need(ddoc, "s_max", f"{path}.domain"), f"{path}.domain.s_max"),
            v_min=_number(_need(ddoc, "v_min", f"{path}.domain"), f"{path}.domain.v_min"),
            v_max=_number(_need(ddoc, "v_max", f"{path}.domain"), f"{path}.domain.v_max"),
            v0=_number(_need(ddoc, "v0", f"{path}.domain"), f"{path}.domain.v0"),
        )
    except ValueError as exc:
        raise SchemaError(f"{path}.domain", str(exc)) from exc
    gdoc = _need(doc, "grid", path)
    if not isinstance(gdoc, dict):
        raise SchemaError(f"{path}.grid", "expected an object")
    grid = GridSpec(
        ns=_integer(_need(gdoc, "ns", f"{path}.grid"), f"{path}.grid.ns"),
        nv=_integer(_need(gdoc, "nv", f"{path}.grid"), f"{path}.grid.nv"),
    )
    if grid.ns < 2 or grid.nv < 2:
        raise SchemaError(f"{path}.grid", "grid counts must be at least 2")
    vdoc = doc.get("verify", {})
    if not isinstance(vdoc, dict):
        raise SchemaError(f"{path}.verify", "expected an object")
    mode = vdoc.get("mode", "analytic")
    if mode not in ("analytic", "fd"):
        raise SchemaError(f"{path}.verify.mode", "expected 'analytic' or 'fd'")
    verify = VerifySpec(
        mode=mode,
        tol=_number(vdoc["tol"], f"{path}.verify.tol") if "tol" in vdoc else None,
        samples=_integer(vdoc.get("samples", 200), f"{path}.verify.samples"),
    )
    cfg = PencilConfig(
        curve=curve,
        marching=marching,
        control=control,
        domain=domain,
        grid=grid,
        verify=verify,
    )
    _check_base_line(cfg, path)
    return cfg


def _check_base_line(cfg: PencilConfig, path: str) -> None:
    """Product factors must vanish on the base line (checked numerically)."""
    if not isinstance(cfg.marching, ProductMS):
        return
    d = cfg.domain
    for label, factor in (("X", cfg.marching.x), ("Y", cfg.marching.y), ("Z", cfg.marching.z)):
        for i in range(5):
            s = d.s_min + (d.s_max - d.s_min) * (i + 0.5) / 5.0
            try:
                value = eval_expr(factor, s, d.v0)
            except Exception:
                continue  # domain gaps are handled later by grid guards
            if abs(value) > _MS_VANISH_TOL:
                raise SchemaError(
                    f"{path}.marching_scale.product.{label}",
                    f"must vanish at v0 = {d.v0:g}, got {value:g} at s = {s:g}",
                )


def load_config(path: str) -> PencilConfig:
    """Read and validate a configuration document."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise SchemaError(path, "no such file") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(path, f"not valid JSON: {exc}") from exc
    return config_from_dict(doc, "$")


def config_to_dict(cfg: PencilConfig) -> dict:
    doc: dict = {}
    if cfg.curve.builtin is not None:
        doc["curve"] = cfg.curve.builtin
    else:
        cd = {"f": to_source(cfg.curve.f), "g": to_source(cfg.curve.g)}
        if cfg.curve.kappa is not None:
            cd["kappa"] = to_source(cfg.curve.kappa)
        if cfg.curve.tau is not None:
            cd["tau"] = to_source(cfg.curve.tau)
        doc["curve"] = cd
    ms = cfg.marching
    if isinstance(ms, DirectMS):
        doc["marching_scale"] = {
            "direct": {
                "alpha": to_source(ms.alpha),
                "beta": to_source(ms.beta),
                "gamma": to_source(ms.gamma),
            }
        }
    elif isinstance(ms, ProductMS):
        doc["marching_scale"] = {
            "product": {
                "l": to_source(ms.l),
                "m": to_source(ms.m),
                "n": to_source(ms.n),
                "X": to_source(ms.x),
                "Y": to_source(ms.y),
                "Z": to_source(ms.z),
            }
        }
    else:
        doc["marching_scale"] = {
            "synthesis": {
                "lambda": ms.lam,
                "sigma": to_source(ms.sigma),
                "sign": "+" if ms.sign > 0 else "-",
                "l": to_source(ms.l),
                "m": to_source(ms.m),
                "n": to_source(ms.n),
            }
        }
    if cfg.control is not None:
        doc["control"] = {"a": cfg.control.a, "b": cfg.control.b, "c": cfg.control.c}
    d = cfg.domain
    doc["domain"] = {
        "s_min": d.s_min,
        "s_max": d.s_max,
        "v_min": d.v_min,
        "v_max": d.v_max,
        "v0": d.v0,
    }
    doc["grid"] = {"ns": cfg.grid.ns, "nv": cfg.grid.nv}
    doc["verify"] = {"mode": cfg.verify.mode, "samples": cfg.verify.samples}
    if cfg.verify.tol is not None:
        doc["verify"]["tol"] = cfg.verify.tol
    return doc


def write_config(cfg: PencilConfig, path: str) -> None:
    """Serialize a configuration; load_config(write_config(c)) == c."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2)
        fh.write("\n")


def build_curve(cfg: PencilConfig, as_printed: bool = False) -> CurveSpec:
    cc = cfg.curve
    if cc.builtin is not None:
        factory = BUILTIN_CURVES[cc.builtin]
        if cc.builtin == "fresnel-helix":
            return factory(as_printed=as_printed)
        return factory()
    return CurveSpec(
        name="explicit", f=cc.f, g=cc.g, kappa_form=cc.kappa, tau_form=cc.tau
    )


def realize(
    cfg: PencilConfig, *, as_printed: bool = False, sign: float | None = None
) -> PencilSpec:
    """Instantiate the configured pencil member.

    ``as_printed`` switches the built-in curve to its historical formula
    and makes synthesis use the plain construction rule.  ``sign``
    overrides the synthesis sign branch.
    """
    curve = build_curve(cfg, as_printed)
    ms = cfg.marching
    if isinstance(ms, DirectMS):
        marching = MarchingScale(alpha=ms.alpha, beta=ms.beta, gamma=ms.gamma)
    elif isinstance(ms, ProductMS):
        marching = product_marching_scale(ms.l, ms.m, ms.n, ms.x, ms.y, ms.z)
    else:
        dtype = DTypeSpec(
            lam=ms.lam, sigma=ms.sigma, sign=sign if sign is not None else ms.sign
        )
        marching = synthesize_product_form(
            curve, dtype, ms.l, ms.m, ms.n, cfg.domain, scaled=not as_printed
        )
    if cfg.control is not None:
        marching = apply_control_coefficients(marching, cfg.control)
    return PencilSpec(curve=curve, marching=marching, domain=cfg.domain)
