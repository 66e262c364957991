import math
import random

import numpy as np
import pytest

from nontext_pd.evalmetrics import (
    Detection,
    EvalThresholds,
    PlagCase,
    assign_mid_ranks,
    case_doc_level,
    char_precision_recall,
    fleiss_kappa,
    granularity,
    mid_rank,
    mrr,
    plagdet,
)


def case(plg=(0, 100), src=(0, 100), d_plg="p", d_src="s"):
    return PlagCase(c_plg=plg, d_plg=d_plg, c_src=src, d_src=d_src)


def det(plg=(0, 100), src=(0, 100), d_plg="p", d_src="s"):
    return Detection(x_plg=plg, d_plg=d_plg, x_src=src, d_src=d_src)


class TestCharPR:
    def test_half_covered_case(self):
        cases = [case(plg=(0, 100), src=(0, 100))]
        dets = [det(plg=(0, 50), src=(0, 50))]
        pr = char_precision_recall(cases, dets)
        assert pr["precision"] == 1.0
        assert pr["recall"] == 0.5

    def test_wrong_source_contributes_nothing(self):
        cases = [case()]
        dets = [det(d_src="other")]
        pr = char_precision_recall(cases, dets)
        assert pr["precision"] == 0.0
        assert pr["recall"] == 0.0

    def test_exact_detections(self):
        cases = [case(), case(plg=(200, 300), src=(500, 600))]
        dets = [det(), det(plg=(200, 300), src=(500, 600))]
        pr = char_precision_recall(cases, dets)
        assert pr["precision"] == 1.0
        assert pr["recall"] == 1.0

    def test_undefined_sides_flagged(self):
        pr = char_precision_recall([], [])
        assert pr["precision"] == 0.0 and pr["recall"] == 0.0
        assert pr["precision_undefined"] and pr["recall_undefined"]

    def test_added_false_detection_lowers_precision_not_recall(self):
        cases = [case()]
        dets = [det()]
        before = char_precision_recall(cases, dets)
        dets_plus = dets + [det(plg=(5000, 5100), src=(5000, 5100), d_src="nowhere")]
        after = char_precision_recall(cases, dets_plus)
        assert after["precision"] < before["precision"]
        assert after["recall"] == before["recall"]

    def test_overlapping_detections_unioned_in_recall(self):
        cases = [case(plg=(0, 100), src=(0, 100))]
        dets = [det(plg=(0, 60), src=(0, 60)), det(plg=(40, 100), src=(40, 100))]
        pr = char_precision_recall(cases, dets)
        assert pr["recall"] == 1.0


class TestGranularity:
    def test_one_detection_per_case(self):
        cases = [case(), case(plg=(200, 250), src=(300, 350))]
        dets = [det(), det(plg=(200, 250), src=(300, 350))]
        assert granularity(cases, dets) == 1.0

    def test_case_hit_twice(self):
        cases = [case()]
        dets = [det(plg=(0, 50), src=(0, 50)), det(plg=(50, 100), src=(50, 100))]
        assert granularity(cases, dets) == 2.0

    def test_mixed(self):
        cases = [case(), case(plg=(200, 300), src=(200, 300))]
        dets = [
            det(plg=(0, 50), src=(0, 50)),
            det(plg=(50, 100), src=(50, 100)),
            det(plg=(200, 300), src=(200, 300)),
        ]
        assert granularity(cases, dets) == 1.5

    def test_no_detected_cases_is_one(self):
        assert granularity([case()], []) == 1.0


class TestPlagdet:
    def test_worked_value_two_thirds(self):
        # P=1, R=0.5, g=1 -> F1 = 2/3, score 2/3
        cases = [case()]
        dets = [det(plg=(0, 50), src=(0, 50))]
        assert plagdet(cases, dets) == pytest.approx(2 / 3, abs=1e-9)

    def test_split_detection_discounted(self):
        # same coverage split into two detections: g=2
        cases = [case()]
        dets = [det(plg=(0, 25), src=(0, 25)), det(plg=(25, 50), src=(25, 50))]
        expected = (2 / 3) / math.log2(3)
        assert plagdet(cases, dets) == pytest.approx(expected, abs=1e-9)

    def test_perfect_detection(self):
        cases = [case()]
        dets = [det()]
        assert plagdet(cases, dets) == pytest.approx(1.0, abs=1e-12)

    def test_zero_when_nothing_found(self):
        assert plagdet([case()], []) == 0.0

    def test_bounded_by_f1(self):
        rng = random.Random(1)
        for _ in range(100):
            cases = [case(plg=(0, rng.randint(50, 150)), src=(0, 100))]
            dets = [
                det(
                    plg=(rng.randint(0, 40), rng.randint(60, 200)),
                    src=(rng.randint(0, 40), rng.randint(60, 200)),
                )
                for _ in range(rng.randint(1, 3))
            ]
            pr = char_precision_recall(cases, dets)
            p, r = pr["precision"], pr["recall"]
            f1 = 2 * p * r / (p + r) if p + r else 0.0
            score = plagdet(cases, dets)
            assert score <= f1 + 1e-12
            g = granularity(cases, dets)
            if g == 1.0:
                assert score == pytest.approx(f1)

    def test_merging_two_detections_never_lowers_score(self):
        cases = [case()]
        split = [det(plg=(0, 50), src=(0, 50)), det(plg=(50, 100), src=(50, 100))]
        merged = [det(plg=(0, 100), src=(0, 100))]
        assert plagdet(cases, merged) >= plagdet(cases, split)


class TestCaseDocLevel:
    def test_sixty_percent_coverage_is_tp_at_half(self):
        cases = [case(plg=(0, 100), src=(0, 100))]
        dets = [det(plg=(0, 60), src=(0, 60))]
        out = case_doc_level(cases, dets, EvalThresholds(0.5, 0.5))
        assert out["case_precision"] == 1.0
        assert out["case_recall"] == 1.0

    def test_forty_percent_not_tp(self):
        cases = [case(plg=(0, 100), src=(0, 100))]
        dets = [det(plg=(0, 40), src=(0, 40))]
        out = case_doc_level(cases, dets, EvalThresholds(0.5, 0.5))
        assert out["case_recall"] == 0.0

    def test_tiny_thresholds_reduce_to_any_overlap(self):
        cases = [case(plg=(0, 100), src=(0, 100))]
        dets = [det(plg=(99, 300), src=(99, 300))]
        strict = case_doc_level(cases, dets, EvalThresholds(0.5, 0.5))
        lax = case_doc_level(cases, dets, EvalThresholds(1e-9, 1e-9))
        assert strict["case_recall"] == 0.0
        assert lax["case_recall"] == 1.0

    def test_doc_level_union_rule(self):
        cases = [
            case(plg=(0, 100), src=(0, 100)),
            case(plg=(200, 300), src=(200, 300)),
        ]
        dets = [det(plg=(0, 100), src=(0, 100))]  # covers half the doc's cases
        out = case_doc_level(cases, dets, EvalThresholds(0.6, 0.5))
        assert out["doc_recall"] == 0.0
        out2 = case_doc_level(cases, dets, EvalThresholds(0.5, 0.5))
        assert out2["doc_recall"] == 1.0


class TestMrr:
    def test_all_rank_one(self):
        assert mrr([1, 1, 1]) == 1.0

    def test_hand_case(self):
        assert mrr([1, 2, 4]) == pytest.approx(7 / 12)

    def test_single_rank_ten(self):
        assert mrr([10]) == pytest.approx(0.1)

    def test_monotone_in_rank_improvement(self):
        worse = mrr([1, 5, 9])
        better = mrr([1, 4, 9])
        assert better > worse


class TestMidRank:
    def test_singleton_is_ordinary_rank(self):
        assert assign_mid_ranks([9.0, 5.0, 3.0]) == [1.0, 2.0, 3.0]

    def test_three_way_tie_starting_at_rank_two(self):
        # one item ahead, then a 3-way tie: ranks 2,3,4 -> 3.0 each
        ranks = assign_mid_ranks([10.0, 7.0, 7.0, 7.0])
        assert ranks == [1.0, 3.0, 3.0, 3.0]
        assert mid_rank(prev_count=1, group_size=3) == 3.0

    def test_two_double_ties(self):
        ranks = assign_mid_ranks([8.0, 8.0, 2.0, 2.0])
        assert ranks == [1.5, 1.5, 3.5, 3.5]

    def test_printed_variant_exposed(self):
        assert mid_rank(1, 3, printed_variant=True) == pytest.approx((1 + 2) / 2)


class TestFleissKappa:
    def test_unanimous_agreement(self):
        ratings = [[5, 0], [0, 5], [5, 0], [0, 5]]
        assert fleiss_kappa(ratings) == 1.0

    def test_random_ratings_near_zero(self):
        rng = random.Random(11)
        subjects = []
        for _ in range(10_000):
            row = [0] * 4
            for _ in range(6):
                row[rng.randint(0, 3)] += 1
            subjects.append(row)
        assert abs(fleiss_kappa(subjects)) < 0.05

    def test_matches_statsmodels_oracle(self):
        from statsmodels.stats.inter_rater import fleiss_kappa as sm_fleiss

        rng = random.Random(12)
        for _ in range(25):
            rows = []
            for _ in range(rng.randint(2, 30)):
                row = [0] * 3
                for _ in range(7):
                    row[rng.randint(0, 2)] += 1
                rows.append(row)
            ours = fleiss_kappa(rows)
            theirs = sm_fleiss(np.array(rows), method="fleiss")
            assert ours == pytest.approx(theirs, abs=1e-9)

    def test_canonical_worked_example(self):
        # the standard 10-subject, 14-rater, 5-category construction
        table = [
            [0, 0, 0, 0, 14],
            [0, 2, 6, 4, 2],
            [0, 0, 3, 5, 6],
            [0, 3, 9, 2, 0],
            [2, 2, 8, 1, 1],
            [7, 7, 0, 0, 0],
            [3, 2, 6, 3, 0],
            [2, 5, 3, 2, 2],
            [6, 5, 2, 1, 0],
            [0, 2, 2, 3, 7],
        ]
        from statsmodels.stats.inter_rater import fleiss_kappa as sm_fleiss

        expected = sm_fleiss(np.array(table), method="fleiss")
        assert fleiss_kappa(table) == pytest.approx(expected, abs=1e-9)
        assert fleiss_kappa(table) == pytest.approx(0.2099, abs=1e-3)

    def test_validation(self):
        with pytest.raises(ValueError):
            fleiss_kappa([[3, 2]])
        with pytest.raises(ValueError):
            fleiss_kappa([[1, 0], [0, 1]])
        with pytest.raises(ValueError):
            fleiss_kappa([[2, 0], [0, 3]])
