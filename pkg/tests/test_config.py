import json
import math

import pytest

from g3pencil.config import (
    DirectMS,
    ProductMS,
    SynthesisMS,
    config_from_dict,
    load_config,
    realize,
    write_config,
)
from g3pencil.errors import NotProductForm, ParseError, SchemaError
from g3pencil.verify import check_isoparametric


def minimal_doc(**overrides):
    doc = {
        "curve": "fresnel-helix",
        "marching_scale": {
            "synthesis": {
                "lambda": 0.5,
                "sigma": "1",
                "sign": "+",
                "l": "1",
                "m": "1",
                "n": "-1",
            }
        },
        "domain": {"s_min": 0.1, "s_max": 2 * math.pi, "v_min": 0.0, "v_max": 5.0, "v0": 0.0},
        "grid": {"ns": 20, "nv": 5},
    }
    doc.update(overrides)
    return doc


class TestShippedConfigs:
    def test_fresnel_helix_config_loads(self):
        cfg = load_config("configs/fresnel-helix.json")
        assert cfg.curve.builtin == "fresnel-helix"
        ms = cfg.marching
        assert isinstance(ms, SynthesisMS)
        assert ms.lam == 0.5
        assert ms.sign == 1.0

    def test_anti_salkowski_config_loads(self):
        cfg = load_config("configs/anti-salkowski.json")
        assert cfg.curve.builtin == "anti-salkowski"
        assert cfg.marching.lam == pytest.approx(math.sqrt(3) / 2)

    @pytest.mark.parametrize(
        "path", ["configs/fresnel-helix.json", "configs/anti-salkowski.json"]
    )
    def test_shipped_configs_reproduce_their_curve(self, path):
        cfg = load_config(path)
        pencil = realize(cfg)
        assert check_isoparametric(pencil.curve, pencil.marching, pencil.domain, 64) == 0.0


class TestSchema:
    def test_both_blocks_rejected(self):
        doc = minimal_doc()
        doc["marching_scale"]["direct"] = {"alpha": "0", "beta": "v", "gamma": "0"}
        with pytest.raises(SchemaError) as info:
            config_from_dict(doc)
        assert "marching_scale" in str(info.value)

    def test_no_block_rejected(self):
        with pytest.raises(SchemaError):
            config_from_dict(minimal_doc(marching_scale={}))

    def test_unknown_builtin(self):
        with pytest.raises(SchemaError):
            config_from_dict(minimal_doc(curve="moebius"))

    def test_grid_floor(self):
        with pytest.raises(SchemaError):
            config_from_dict(minimal_doc(grid={"ns": 1, "nv": 5}))

    def test_missing_domain_entry(self):
        doc = minimal_doc()
        del doc["domain"]["v0"]
        with pytest.raises(SchemaError) as info:
            config_from_dict(doc)
        assert "v0" in str(info.value)

    def test_bad_expression_surfaces_parse_error(self):
        doc = minimal_doc()
        doc["marching_scale"]["synthesis"]["sigma"] = "sin("
        with pytest.raises(ParseError):
            config_from_dict(doc)

    def test_quadratic_factor_vanishing_at_v0_accepted(self):
        doc = minimal_doc(
            marching_scale={
                "product": {
                    "l": "1",
                    "m": "1",
                    "n": "-1",
                    "X": "v^2",
                    "Y": "v",
                    "Z": "v",
                }
            }
        )
        cfg = config_from_dict(doc)
        assert isinstance(cfg.marching, ProductMS)

    def test_factor_not_vanishing_at_v0_rejected(self):
        doc = minimal_doc(
            marching_scale={
                "product": {
                    "l": "1",
                    "m": "1",
                    "n": "-1",
                    "X": "v + 1",
                    "Y": "v",
                    "Z": "v",
                }
            }
        )
        with pytest.raises(SchemaError) as info:
            config_from_dict(doc)
        assert "X" in str(info.value)

    def test_missing_file(self):
        with pytest.raises(SchemaError):
            load_config("/nonexistent/config.json")

    def test_invalid_json(self, tmp_path):
        p = tmp_path / "broken.json"
        p.write_text("{not json")
        with pytest.raises(SchemaError):
            load_config(str(p))

    def test_sign_validation(self):
        doc = minimal_doc()
        doc["marching_scale"]["synthesis"]["sign"] = "?"
        with pytest.raises(SchemaError):
            config_from_dict(doc)

    def test_explicit_curve_with_closed_forms(self):
        doc = minimal_doc(
            curve={"f": "s^2", "g": "s^3", "kappa": "sqrt(4+36*s^2)", "tau": "1"},
            marching_scale={"direct": {"alpha": "0", "beta": "v", "gamma": "0"}},
        )
        cfg = config_from_dict(doc)
        assert cfg.curve.builtin is None
        assert cfg.curve.kappa is not None


class TestRoundTrip:
    @pytest.mark.parametrize(
        "doc",
        [
            minimal_doc(),
            minimal_doc(
                marching_scale={"direct": {"alpha": "v*sin(s)", "beta": "v^2", "gamma": "-v"}},
            ),
            minimal_doc(
                curve={"f": "s^2", "g": "s^3"},
                marching_scale={
                    "product": {
                        "l": "2",
                        "m": "1",
                        "n": "-1",
                        "X": "v",
                        "Y": "v^2",
                        "Z": "v",
                    }
                },
                control={"a": 0.5, "b": 2.0, "c": 1.0},
                verify={"mode": "fd", "tol": 1e-5, "samples": 32},
            ),
        ],
    )
    def test_write_then_load_is_identity(self, doc, tmp_path):
        cfg = config_from_dict(doc)
        path = tmp_path / "roundtrip.json"
        write_config(cfg, str(path))
        assert load_config(str(path)) == cfg


class TestRealize:
    def test_direct_marching_scale(self):
        doc = minimal_doc(
            marching_scale={"direct": {"alpha": "0", "beta": "v", "gamma": "0"}}
        )
        pencil = realize(config_from_dict(doc))
        assert pencil.marching.product is None

    def test_control_with_direct_scale_rejected(self):
        doc = minimal_doc(
            marching_scale={"direct": {"alpha": "0", "beta": "v", "gamma": "0"}},
            control={"a": 1.0, "b": 2.0, "c": 3.0},
        )
        with pytest.raises(NotProductForm):
            realize(config_from_dict(doc))

    def test_sign_override(self):
        cfg = config_from_dict(minimal_doc())
        plus = realize(cfg)
        minus = realize(cfg, sign=-1.0)
        from g3pencil.exprjet import eval_expr

        assert eval_expr(plus.marching.beta, 2.0, 1.0) == pytest.approx(
            -eval_expr(minus.marching.beta, 2.0, 1.0)
        )

    def test_as_printed_switches_curve_and_rule(self):
        cfg = config_from_dict(minimal_doc())
        printed = realize(cfg, as_printed=True)
        assert printed.curve.name == "fresnel-helix-printed"
