"""Campaign configuration, determinism, and report structure."""

import json

import numpy as np
import pytest

from qrelent import ConfigError
from qrelent.campaign import (
    IDENTITIES,
    INFINITE_CONSISTENT,
    INFINITE_MISMATCH,
    VerifyConfig,
    report_document,
    run_campaign,
    write_report,
)


def small(identity, **kw):
    base = dict(identity=identity, dims=(2, 3), trials=6, seed=7)
    base.update(kw)
    return VerifyConfig(**base)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(identity="nonsense"),
        dict(identity="lemma1", dims=(1, 2)),
        dict(identity="lemma1", dims=()),
        dict(identity="lemma1", trials=0),
        dict(identity="lemma1", seed=-1),
    ],
)
def test_config_rejects(kwargs):
    base = dict(identity="lemma1", dims=(2,), trials=1, seed=0)
    base.update(kwargs)
    with pytest.raises(ConfigError):
        VerifyConfig(**base)


def test_run_campaign_rejects_bad_threads():
    with pytest.raises(ConfigError):
        run_campaign(small("lemma1"), threads=0)


@pytest.mark.parametrize("identity", IDENTITIES)
def test_small_campaign_passes(identity):
    result = run_campaign(small(identity))
    assert result.failures == 0
    assert len(result.records) == 12
    for rec in result.records:
        assert rec.passed
        assert rec.identity == identity


def test_report_is_deterministic():
    cfg = small("theorem1", include_infinite=True)
    a = report_document(run_campaign(cfg))
    b = report_document(run_campaign(cfg))
    assert a == b


def test_threads_do_not_change_report():
    cfg = small("corollary2")
    serial = report_document(run_campaign(cfg, threads=1))
    parallel = report_document(run_campaign(cfg, threads=3))
    assert serial == parallel


def test_infinite_slots_appear():
    cfg = small("theorem1", trials=9, include_infinite=True)
    result = run_campaign(cfg)
    tagged = [r for r in result.records if r.residual == INFINITE_CONSISTENT]
    mismatched = [r for r in result.records if r.residual == INFINITE_MISMATCH]
    assert len(tagged) == 2 * 3  # every third trial, per dim
    assert not mismatched
    assert result.failures == 0


def test_without_infinite_all_residuals_numeric():
    result = run_campaign(small("theorem1", trials=9))
    assert all(isinstance(r.residual, float) for r in result.records)


def test_record_order_sorts_dims():
    cfg = VerifyConfig(identity="eq3a", dims=(4, 2), trials=3, seed=1)
    result = run_campaign(cfg)
    keys = [(r.dim, r.trial) for r in result.records]
    assert keys == sorted(keys)
    assert keys[0][0] == 2


def test_report_document_shape():
    cfg = small("lemma1")
    result = run_campaign(cfg)
    doc = report_document(result)
    assert doc["schema_version"] == 1
    assert doc["identity"] == "lemma1"
    assert doc["config"]["dims"] == [2, 3]
    assert doc["config"]["trials"] == 6
    assert doc["config"]["seed"] == 7
    assert "tolerances" in doc["config"]
    assert "wall_time" not in doc
    assert "wall_time" not in doc["summary"]
    assert doc["summary"]["trials"] == 12
    assert doc["summary"]["failures"] == 0
    records = doc["records"]
    assert len(records) == 12
    finite = [r["residual"] for r in records if isinstance(r["residual"], float)]
    assert doc["summary"]["max_residual"] == max(finite)
    for rec in records:
        assert set(rec) >= {"identity", "dim", "trial", "seed", "residual", "passed"}


def test_write_report_roundtrip(tmp_path):
    cfg = small("corollary1", trials=2)
    result = run_campaign(cfg)
    path = tmp_path / "report.json"
    write_report(result, path)
    text = path.read_text()
    assert text.endswith("\n")
    doc = json.loads(text)
    assert doc == report_document(result)


def test_max_residual_is_small():
    for identity in IDENTITIES:
        result = run_campaign(small(identity, trials=4))
        assert result.max_residual < 1e-8, identity


def test_singular_toggle_runs():
    result = run_campaign(small("theorem2", include_singular=False))
    assert result.failures == 0


def test_min_nonzero_eig_recorded():
    result = run_campaign(small("lemma1", trials=3))
    eigs = [r.min_nonzero_eig for r in result.records if r.min_nonzero_eig is not None]
    assert eigs
    assert all(e > 0 for e in eigs)
    assert all(np.isfinite(e) for e in eigs)
