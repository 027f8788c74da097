import json
import math

import pytest

from kzcoreset.config import PipelineConfig, load_calibration
from kzcoreset.enumeration import BUDGET_ENV
from kzcoreset.errors import DomainError


def test_defaults_come_from_calibration(monkeypatch):
    monkeypatch.delenv(BUDGET_ENV, raising=False)
    cal = load_calibration()
    cfg = PipelineConfig.resolve()
    assert cfg.constant == cal["constant"] and cfg.c_jl == cal["c_jl"]
    assert cfg.enum_budget == cal["enum_budget"]


def test_precedence(tmp_path, monkeypatch):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"constant": 0.7, "k": 3, "enum_budget": 50}))
    monkeypatch.setenv(BUDGET_ENV, "77")
    cfg = PipelineConfig.resolve({"k": 1, "constant": None}, p)
    assert cfg.k == 1 and cfg.constant == 0.7 and cfg.enum_budget == 50
    assert PipelineConfig.resolve().enum_budget == 77
    assert PipelineConfig.resolve({"enum_budget": 5}).enum_budget == 5


def test_bad_env_and_keys(tmp_path, monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "lots")
    with pytest.raises(DomainError):
        PipelineConfig.resolve()
    monkeypatch.delenv(BUDGET_ENV)
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"kk": 2}))
    with pytest.raises(DomainError, match="kk"):
        PipelineConfig.resolve(None, p)
    p.write_text("{oops")
    with pytest.raises(DomainError, match="invalid JSON"):
        PipelineConfig.resolve(None, p)


@pytest.mark.parametrize("bad", [{"epsilon": 0.0}, {"rho": 0.5}, {"alpha": 0.9}, {"workers": 0},
                                 {"max_retries": -1}, {"c_jl": 0}, {"s_of_k": -1.0}, {"k": 0}])
def test_validation(bad):
    with pytest.raises(DomainError):
        PipelineConfig.resolve(bad)


def test_auto_s_of_k():
    cfg = PipelineConfig.resolve({"k": 2, "z": 1.0})
    # constant * 2^(2z) * z * k^2 * log2(k+1) * sdim_coef
    want = cfg.constant * 4 * 1 * 4 * math.log2(3) * cfg.sdim_coef
    assert cfg.resolved_s_of_k() == pytest.approx(want)
    assert PipelineConfig.resolve({"s_of_k": 3.0}).resolved_s_of_k() == 3.0
