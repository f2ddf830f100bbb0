#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hanet/errors.hpp"
#include "hanet/metrics.hpp"
#include "hanet/rng.hpp"

using namespace hanet;

namespace {

std::vector<int> random_mask(Rng& rng, size_t n, int classes) {
    std::vector<int> m(n);
    for (size_t i = 0; i < n; ++i) m[i] = static_cast<int>(rng.uniform_u64(classes));
    return m;
}

}  // namespace

TEST_CASE("confusion counts one class against the rest") {
    //            pred:   1 1 1 0 0 0 1 0
    //            truth:  1 1 0 1 0 0 0 0
    std::vector<int> pred{1, 1, 1, 0, 0, 0, 1, 0};
    std::vector<int> truth{1, 1, 0, 1, 0, 0, 0, 0};
    ConfusionCounts c = confusion(pred, truth, 1);
    CHECK(c.tp == 2);
    CHECK(c.fp == 2);
    CHECK(c.fn == 1);
    CHECK(c.tn == 3);
    CHECK_THROWS_AS(confusion(pred, std::vector<int>{1, 0}, 1), DimensionError);
}

TEST_CASE("dice hand values") {
    std::vector<int> a{1, 1, 1, 1, 0, 0};
    std::vector<int> b{1, 1, 0, 0, 1, 1};
    // |P|=4, |T|=4, |P∩T|=2 -> 2*2/(4+4) = 0.5
    CHECK(dice(a, b, 1) == 0.5);
    CHECK(dice(a, a, 1) == 1.0);
    std::vector<int> disjoint{0, 0, 0, 0, 1, 1};
    CHECK(dice(a, disjoint, 1) == 0.0);  // no overlap at all
    // class absent from both masks: vacuous perfect agreement
    CHECK(dice(a, b, 2) == 1.0);
}

TEST_CASE("dice follows from IoU") {
    Rng rng(51);
    for (int t = 0; t < 30; ++t) {
        std::vector<int> p = random_mask(rng, 64, 2);
        std::vector<int> q = random_mask(rng, 64, 2);
        size_t inter = 0, uni = 0;
        for (size_t i = 0; i < p.size(); ++i) {
            inter += (p[i] == 1 && q[i] == 1);
            uni += (p[i] == 1 || q[i] == 1);
        }
        if (uni == 0) continue;
        const double iou = static_cast<double>(inter) / static_cast<double>(uni);
        CHECK(dice(p, q, 1) == doctest::Approx(2.0 * iou / (1.0 + iou)).epsilon(1e-12));
    }
}

TEST_CASE("mdice averages per-class dice") {
    std::vector<int> pred{0, 1, 2, 2};
    std::vector<int> truth{0, 1, 2, 1};
    // class 1: P={1}, T={1,3}, inter={1} -> 2/3; class 2: P={2,3}, T={2}, inter={2} -> 2/3
    CHECK(mdice(pred, truth, {1, 2}) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(mdice(pred, pred, {1, 2}) == 1.0);
    CHECK_THROWS_AS(mdice(pred, truth, {}), ConfigError);

    CHECK(mdice({0.9599, 0.9005}) == doctest::Approx(0.9302).epsilon(5e-5));
    CHECK(mdice(std::vector<double>{0.5}) == 0.5);
    CHECK_THROWS_AS(mdice(std::vector<double>{}), ConfigError);
}

TEST_CASE("cdr error from vertical extents") {
    const size_t h = 100, w = 4;
    auto build = [&](size_t disc_top, size_t disc_bot, size_t cup_top, size_t cup_bot) {
        std::vector<int> m(h * w, 0);
        for (size_t y = disc_top; y < disc_bot; ++y)
            for (size_t x = 0; x < w; ++x) m[y * w + x] = 1;
        for (size_t y = cup_top; y < cup_bot; ++y)
            for (size_t x = 0; x < w; ++x) m[y * w + x] = 2;
        return m;
    };
    // cup extent 50, disc extent 100 -> CDR 0.5 in both masks
    std::vector<int> truth = build(0, 100, 25, 75);
    CHECK(cdr_error(truth, truth, h, w) == 0.0);
    // predicted cup extent 60 -> CDR 0.6, error 0.1
    std::vector<int> pred = build(0, 100, 20, 80);
    CHECK(cdr_error(pred, truth, h, w) == doctest::Approx(0.1).epsilon(1e-12));
    // missing predicted cup -> predicted CDR 0, error equals the true CDR
    std::vector<int> nocup = build(0, 100, 50, 50);
    CHECK(cdr_error(nocup, truth, h, w) == doctest::Approx(0.5).epsilon(1e-12));
    // empty predicted disc -> predicted CDR 0 as well
    std::vector<int> empty(h * w, 0);
    CHECK(cdr_error(empty, truth, h, w) == doctest::Approx(0.5).epsilon(1e-12));
    // malformed ground truth without a disc
    CHECK_THROWS_AS(cdr_error(pred, empty, h, w), DataError);
    // size validation
    CHECK_THROWS_AS(cdr_error(pred, truth, h, w + 1), DimensionError);
    std::vector<int> small(10, 0);
    CHECK_THROWS_AS(cdr_error(small, truth, h, w), DimensionError);
}

TEST_CASE("binary stats on a worked example") {
    // tp=2, fp=1, fn=1, tn=4
    std::vector<int> pred{1, 1, 1, 0, 0, 0, 0, 0};
    std::vector<int> truth{1, 1, 0, 1, 0, 0, 0, 0};
    BinaryStats s = binary_stats(pred, truth);
    CHECK(s.acc == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(s.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(s.se == doctest::Approx(2.0 / 3.0).epsilon(1e-15));  // tp/(tp+fn) = 2/3
    CHECK(s.sp == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(s.iou == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("binary stats treat any nonzero label as foreground") {
    std::vector<int> pred{2, 1, 0, 0};
    std::vector<int> truth{1, 2, 0, 1};
    BinaryStats s = binary_stats(pred, truth);
    // fg(pred) = {0,1}, fg(truth) = {0,1,3}: tp=2, fp=0, fn=1, tn=1
    CHECK(s.acc == 0.75);
    CHECK(s.se == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(s.sp == 1.0);
}

TEST_CASE("binary stats degenerate conventions") {
    std::vector<int> zeros(8, 0);
    BinaryStats s = binary_stats(zeros, zeros);
    CHECK(s.acc == 1.0);
    CHECK(s.f1 == 1.0);   // 0/0 counts as perfect agreement
    CHECK(s.se == 1.0);
    CHECK(s.sp == 1.0);
    CHECK(s.iou == 1.0);

    std::vector<int> ones(8, 1);
    BinaryStats t = binary_stats(ones, ones);
    CHECK(t.sp == 1.0);  // no negatives anywhere
    CHECK(t.se == 1.0);
}

TEST_CASE("binary stats match a counting reference on random masks") {
    Rng rng(52);
    for (int t = 0; t < 20; ++t) {
        std::vector<int> pred = random_mask(rng, 256, 3);
        std::vector<int> truth = random_mask(rng, 256, 3);
        double tp = 0, fp = 0, fn = 0, tn = 0;
        for (size_t i = 0; i < pred.size(); ++i) {
            const bool p = pred[i] != 0, q = truth[i] != 0;
            tp += p && q;
            fp += p && !q;
            fn += !p && q;
            tn += !p && !q;
        }
        BinaryStats s = binary_stats(pred, truth);
        CHECK(s.acc == doctest::Approx((tp + tn) / 256.0).epsilon(1e-13));
        if (tp + fp + fn > 0)
            CHECK(s.f1 == doctest::Approx(2 * tp / (2 * tp + fp + fn)).epsilon(1e-13));
        if (tp + fn > 0) CHECK(s.se == doctest::Approx(tp / (tp + fn)).epsilon(1e-13));
        if (tn + fp > 0) CHECK(s.sp == doctest::Approx(tn / (tn + fp)).epsilon(1e-13));
        if (tp + fp + fn > 0)
            CHECK(s.iou == doctest::Approx(tp / (tp + fp + fn)).epsilon(1e-13));
    }
}

TEST_CASE("metrics are invariant to a shared pixel permutation") {
    Rng rng(53);
    std::vector<int> pred = random_mask(rng, 100, 3);
    std::vector<int> truth = random_mask(rng, 100, 3);
    std::vector<size_t> perm(100);
    for (size_t i = 0; i < 100; ++i) perm[i] = i;
    for (size_t i = 100; i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform_u64(i)]);
    std::vector<int> pred_p(100), truth_p(100);
    for (size_t i = 0; i < 100; ++i) {
        pred_p[i] = pred[perm[i]];
        truth_p[i] = truth[perm[i]];
    }
    CHECK(mdice(pred, truth, {1, 2}) == mdice(pred_p, truth_p, {1, 2}));
    BinaryStats a = binary_stats(pred, truth);
    BinaryStats b = binary_stats(pred_p, truth_p);
    CHECK(a.acc == b.acc);
    CHECK(a.f1 == b.f1);
    CHECK(a.iou == b.iou);
}
