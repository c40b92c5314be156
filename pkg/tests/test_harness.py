"""Harness tests: ledger contents, campaign semantics, search, determinism."""

import json
from fractions import Fraction

import mpmath
import pytest

from hhbounds import bounds, functionals
from hhbounds.corpus import Interval, TestFunction, corpus_standard
from hhbounds.harness import (
    PROOF_BACKED,
    STATED_ONLY,
    CampaignConfig,
    claim_ids,
    find_counterexample,
    get_claim,
    ledger_standard,
    run_campaign,
    sample_intervals,
)
from hhbounds.oracle import to_mpf

LEDGER = ledger_standard()


class TestLedger:
    def test_size_and_uniqueness(self):
        ids = [c.id for c in LEDGER]
        assert len(ids) == len(set(ids))
        assert len(ids) >= 16

    def test_thm5_claim(self):
        c = get_claim("thm5")
        assert c.rhs_spec == "bound_theorem5"
        assert c.provenance == PROOF_BACKED

    def test_power_mean_family_has_both_variants(self):
        for base in ("thm6", "cor1", "cor2", "cor3", "cor4", "cor5", "cor8",
                     "prop1", "prop2", "prop3"):
            assert f"{base}-stated" in claim_ids()
            assert f"{base}-derived" in claim_ids()
            assert get_claim(f"{base}-stated").provenance == STATED_ONLY
            assert get_claim(f"{base}-derived").provenance == PROOF_BACKED

    def test_classical_claims_present(self):
        for cid in ("hh", "hh-p", "mid-envelope", "trap-envelope",
                    "simpson-4th-p4", "simpson-4th-p2"):
            assert cid in claim_ids()
        assert get_claim("simpson-4th-p2").provenance == STATED_ONLY
        assert get_claim("simpson-4th-p4").provenance == PROOF_BACKED

    def test_selectors_resolve(self):
        resolvable = {
            "bound_theorem5": bounds.bound_theorem5,
            "bound_theorem6": bounds.bound_theorem6,
            "bound_corollary": bounds.bound_corollary,
            "bound_bounded_m": bounds.bound_bounded_m,
        }
        for c in LEDGER:
            if c.rhs_spec in resolvable:
                assert callable(resolvable[c.rhs_spec])

    def test_unknown_claim(self):
        with pytest.raises(KeyError):
            get_claim("thm99")


class TestSampler:
    def test_bounds_and_width(self):
        cfg = CampaignConfig(trials=200, seed=9)
        for a, b in sample_intervals(cfg):
            assert 0.1 <= a < b <= 10.0
            assert b - a >= 0.05

    def test_seed_determinism_and_grid_independence(self):
        base = CampaignConfig(trials=50, seed=3)
        denser = CampaignConfig(trials=50, seed=3, lambda_grid=(0.0, 0.5, 1.0))
        assert sample_intervals(base) == sample_intervals(denser)
        assert sample_intervals(base) != sample_intervals(
            CampaignConfig(trials=50, seed=4)
        )


class TestRunCampaign:
    def test_proof_backed_claims_never_violated_on_polynomials(self):
        proof_backed = tuple(c.id for c in LEDGER if c.provenance == PROOF_BACKED)
        cfg = CampaignConfig(
            claims=proof_backed,
            functions=("poly2", "poly3", "poly4", "poly5", "const1"),
            trials=6,
            seed=21,
        )
        res = run_campaign(cfg)
        assert res.summary["by_status"]["violated"] == 0
        assert res.summary["violated_proof_backed"] == []

    def test_prop1_stated_counterexample_record(self):
        cfg = CampaignConfig(
            claims=("prop1-stated",), functions=("poly3",), q_grid=(1.0, 2.0)
        )
        res = run_campaign(cfg)
        viol = [r for r in res.records if r.status == "violated"]
        assert len(viol) == 1
        r = viol[0]
        assert (r.a, r.b, r.q) == (1.0, 2.0, 2.0)
        assert r.lhs == pytest.approx(3 / 8)
        assert r.margin == pytest.approx(-0.09549150281, abs=1e-9)
        assert r.exact

    def test_empty_function_list(self):
        res = run_campaign(CampaignConfig(claims=("all",), functions=()))
        assert res.records == ()
        assert res.summary["total"] == 0
        assert all(v == 0 for v in res.summary["by_status"].values())

    def test_records_sorted_canonically(self):
        cfg = CampaignConfig(claims=("thm5", "hh"), functions=("all",), trials=3, seed=2)
        res = run_campaign(cfg)
        keys = [r.sort_key() for r in res.records]
        assert keys == sorted(keys)

    def test_status_partition(self):
        cfg = CampaignConfig(claims=("all",), functions=("all",), seed=7)
        res = run_campaign(cfg)
        assert res.summary["total"] == len(res.records)
        assert sum(res.summary["by_status"].values()) == len(res.records)
        for r in res.records:
            if r.status in ("hypothesis_failed", "undefined"):
                assert r.lhs is None and r.rhs is None and r.margin is None
            else:
                assert r.lhs is not None and r.rhs is not None
                assert r.margin == pytest.approx(r.rhs - r.lhs, abs=1e-12)

    def test_violated_polynomial_records_are_exact(self):
        cfg = CampaignConfig(claims=("all",), functions=("all",), seed=7)
        res = run_campaign(cfg)
        for r in res.records:
            if r.status == "violated" and r.function.startswith(("poly", "const")):
                assert r.exact

    def test_determinism_byte_identical(self):
        cfg = CampaignConfig(claims=("all",), functions=("all",), trials=4, seed=13)
        r1 = run_campaign(cfg)
        r2 = run_campaign(cfg)
        assert [r.as_dict() for r in r1.records] == [r.as_dict() for r in r2.records]
        assert json.dumps(r1.summary) == json.dumps(r2.summary)

    def test_monotone_grids_never_flip_status(self):
        small = CampaignConfig(
            claims=("thm6-stated", "thm6-derived"),
            functions=("poly2", "expx"),
            lambda_grid=(0.0, 0.5, 1.0),
            q_grid=(1.0, 2.0),
            trials=2,
            seed=5,
        )
        large = CampaignConfig(
            claims=("thm6-stated", "thm6-derived"),
            functions=("poly2", "expx"),
            lambda_grid=(0.0, 0.25, 0.5, 0.75, 1.0),
            q_grid=(1.0, 1.5, 2.0, 4.0),
            trials=2,
            seed=5,
        )
        by_key_small = {
            (r.claim, r.function, r.a, r.b, r.lam, r.q): r.status
            for r in run_campaign(small).records
        }
        by_key_large = {
            (r.claim, r.function, r.a, r.b, r.lam, r.q): r.status
            for r in run_campaign(large).records
        }
        assert set(by_key_small) <= set(by_key_large)
        for key, status in by_key_small.items():
            assert by_key_large[key] == status

    def test_undefined_records_from_broken_function(self):
        bad = TestFunction(
            id="bad",
            f=lambda x: float("nan") + 0.0 * x,
            d1=lambda x: 0.0 * x,
            d2=lambda x: float("nan") + 0.0 * x,
            domain=Interval(0.0, 10.0),
        )
        registry = {"bad": bad}
        cfg = CampaignConfig(claims=("thm5",), functions=("bad",), lambda_grid=(0.5,))
        res = run_campaign(cfg, registry=registry)
        assert len(res.records) == 1
        assert res.records[0].status == "undefined"

    def test_interval_outside_function_domain_is_hypothesis_failed(self):
        cfg = CampaignConfig(
            claims=("hh",), functions=("bump",), intervals=((1.0, 2.0),)
        )
        res = run_campaign(cfg)
        assert [r.status for r in res.records] == ["hypothesis_failed"]

    def test_no_false_positives_at_higher_precision(self):
        # every reported violation survives standalone re-evaluation
        cfg = CampaignConfig(claims=("all",), functions=("all",), seed=7)
        res = run_campaign(cfg)
        checked = 0
        for r in res.records:
            if r.status != "violated" or checked >= 40:
                continue
            claim = get_claim(r.claim)
            fn = {f.id: f for f in corpus_standard()}[r.function]
            scale = max(1.0, abs(r.lhs), abs(r.rhs))
            if claim.family in ("thm5", "thm6", "cor") and fn.poly_coeffs is not None:
                lam = Fraction(r.lam) if claim.rule is None else bounds.RULE_LAMBDA_EXACT[claim.rule]
                lhs = abs(functionals.functional_lambda_exact(fn, Interval(r.a, r.b), lam))
                d2a = abs(fn.d2(r.a))
                d2b = abs(fn.d2(r.b))
                with mpmath.workdps(50):
                    rhs = bounds.bound_theorem6_mp(
                        Interval(r.a, r.b), lam, Fraction(r.q), d2a, d2b, claim.variant
                    )
                    margin = float(rhs - to_mpf(lhs))
                assert margin < -cfg.tol / 10 * scale, r
                checked += 1
            elif claim.family in ("thm5", "thm6", "cor") and fn.id == "expx":
                refined = functionals.average_value(fn, Interval(r.a, r.b), 1e-13)
                lhs = abs(
                    functionals.functional_lambda(
                        fn, Interval(r.a, r.b), r.lam, refined
                    ).value
                )
                assert r.rhs - lhs < -cfg.tol / 10 * scale, r
                checked += 1
        assert checked > 0


class TestFindCounterexample:
    def test_thm6_stated_violation_found_and_shrunk(self):
        cfg = CampaignConfig(
            functions=("poly2",),
            trials=200,
            seed=11,
            q_grid=(1.0, 1.5, 2.0, 4.0),
        )
        out = find_counterexample("thm6-stated", cfg)
        assert out.record is not None
        r = out.record
        assert r.status == "violated"
        assert r.q > 1.0  # stated family only fails beyond q = 1
        assert r.b - r.a <= 1.0 + 1e-6  # shrunk toward unit width
        assert r.exact

    def test_q_shrinks_to_smallest_violating_grid_value(self):
        cfg = CampaignConfig(
            functions=("poly2",),
            trials=200,
            seed=11,
            lambda_grid=(0.0,),
            q_grid=(1.0, 1.5, 2.0, 4.0, 10.0),
        )
        out = find_counterexample("cor1-stated", cfg)
        assert out.record is not None
        # for constant |f''| and lam = 0 every q > 1 violates, so 1.5 is minimal
        assert out.record.q == 1.5

    def test_proof_backed_claim_yields_no_counterexample(self):
        cfg = CampaignConfig(
            functions=("poly2", "poly3", "const1"), trials=300, seed=23
        )
        out = find_counterexample("thm5", cfg)
        assert out.record is None
        assert out.trials == 300

    def test_hh_on_convex_corpus_yields_none(self):
        cfg = CampaignConfig(
            functions=("poly2", "poly3", "poly4", "expx"), trials=150, seed=2
        )
        out = find_counterexample("hh", cfg)
        assert out.record is None

    def test_empty_function_space(self):
        out = find_counterexample("thm5", CampaignConfig(functions=(), trials=10))
        assert out.record is None and out.trials == 0
