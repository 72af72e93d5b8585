#include <doctest.h>

#include <cmath>
#include <vector>

#include "rdi/channels.hpp"
#include "rdi/regions.hpp"
#include "test_util.hpp"

using namespace rdi;
using rdi_test::bern;

namespace {

// (U, V) channel with both parts conditionally independent given the
// conditioning axes; pass singletons for empty auxiliaries.
ConditionalPMF uv_channel(const ConditionalPMF& v_part) {
    std::vector<Axis> given = v_part.given_axes();
    ConditionalPMF u_const = make_constant_channel(given, "U");
    return product_channel(u_const, v_part);
}

AuxChannelSet empty_aux(const JointPMF& source) {
    std::vector<Axis> given = {Axis{"X", source.alphabet_of("X")},
                               Axis{"Y", source.alphabet_of("Y")}};
    ConditionalPMF u = make_constant_channel(given, "U");
    ConditionalPMF v = make_constant_channel(given, "V");
    return AuxChannelSet{product_channel(u, v), {}, {}};
}

// V = BSC(d) applied to X, conditioning lifted to (X, Y).
AuxChannelSet bsc_aux(const JointPMF& source, double crossover) {
    ConditionalPMF v = lift_channel(make_bsc(crossover, "X", "V"),
                                    {Axis{"Y", source.alphabet_of("Y")}});
    return AuxChannelSet{uv_channel(v), {}, {}};
}

// V = X with the given keep probability, else an erasure-like symbol.
AuxChannelSet timeshare_aux(const JointPMF& source, double keep) {
    ConditionalPMF v = lift_channel(make_timeshare_channel(source.alphabet_of("X"), keep, "X", "V"),
                                    {Axis{"Y", source.alphabet_of("Y")}});
    return AuxChannelSet{uv_channel(v), {}, {}};
}

// x-hat = y where informative, otherwise v. Inputs ordered (Y, U, V).
Reconstruction erased_recon_open(const JointPMF& source) {
    const int ny = source.alphabet_of("Y").size();
    Reconstruction rec;
    rec.inputs = {"Y", "U", "V"};
    rec.xhat_size = source.alphabet_of("X").size();
    for (int y = 0; y < ny; ++y)
        for (int v = 0; v < 2; ++v) rec.table.push_back(y < rec.xhat_size ? y : v);
    return rec;
}

}  // namespace

TEST_CASE("open bounds with empty auxiliaries") {
    JointPMF j = rdi_test::example_open();
    const DistortionSpec hamming = DistortionSpec::hamming(2);
    AuxChannelSet aux = empty_aux(j);
    const double i_xz = mutual_information(j, {"X"}, {"Z"});

    RDIPoint outer = outer_bound_open(j, aux, hamming);
    CHECK(outer.r == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(outer.delta == doctest::Approx(i_xz).epsilon(1e-12));

    InnerBoundPoint inner = inner_bound_open(j, aux, hamming);
    CHECK(inner.point.r == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(inner.point.delta == doctest::Approx(i_xz).epsilon(1e-12));
    CHECK(inner.key_rate == doctest::Approx(0.0).epsilon(1e-12));
    // best constant reconstruction given Y: distortion of guessing from Y
    CHECK(inner.point.d == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("outer bound V = X symbolic reduction") {
    JointPMF j = rdi_test::example_open();
    ConditionalPMF v = lift_channel(make_identity_channel(Alphabet(2), "X", "V"),
                                    {Axis{"Y", j.alphabet_of("Y")}});
    AuxChannelSet aux{uv_channel(v), {}, {}};
    const DistortionSpec hamming = DistortionSpec::hamming(2);
    RDIPoint outer = outer_bound_open(j, aux, hamming);
    const double h_x_y = entropy(j, {"X"}, {"Y"});
    CHECK(outer.r == doctest::Approx(h_x_y).epsilon(1e-11));
    const double expected_second = mutual_information(j, {"X"}, {"Z"}) + h_x_y -
                                   entropy(j, {"Y"}, {"X", "Z"});
    CHECK(outer.delta ==
          doctest::Approx(std::max(mutual_information(j, {"X"}, {"Z"}), expected_second))
              .epsilon(1e-11));
    CHECK(outer.d == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("region_open_markov reproduces the switch-open example values") {
    JointPMF j = rdi_test::example_open(0.8, 0.5);
    RDSolverConfig cfg;
    const DistortionSpec hamming = DistortionSpec::hamming(2);
    RDIPoint at0 = region_open_markov(j, hamming, 0.0, cfg);
    CHECK(at0.r == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(at0.delta == doctest::Approx(0.2780719051126377).epsilon(1e-9));
    RDIPoint flat = region_open_markov(j, hamming, 0.4, cfg);
    CHECK(flat.r == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(flat.delta == doctest::Approx(0.0290494055453314).epsilon(1e-9));

    const DistortionSpec ll = DistortionSpec::log_loss();
    RDIPoint log3 = region_open_markov(j, ll, 0.3, cfg);
    CHECK(log3.r == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(log3.delta == doctest::Approx(0.0290494055453314).epsilon(1e-11));

    // chain violation: swap roles so X - Y - Z fails
    JointPMF bad = extend(extend(bern(0.5), make_bsc(0.3, "X", "Z")),
                          make_constant_channel({Axis{"X", Alphabet(2)}}, "Y"));
    CHECK_THROWS_AS(region_open_markov(bad, hamming, 0.1, cfg), PreconditionError);
}

TEST_CASE("tightness: erased-Y Hamming example") {
    const double p_e = 0.8;
    JointPMF j = rdi_test::example_open(p_e, 0.5);
    const DistortionSpec hamming = DistortionSpec::hamming(2);
    CorollaryParams params;
    params.p_e = p_e;
    params.z_bias = 0.5;

    for (double D : {0.0, 0.05, 0.2, 0.3}) {
        RDIPoint region = corollary_region(CorollaryCase::erased_y_hamming, params, D);
        AuxChannelSet aux = bsc_aux(j, D / p_e);
        aux.reconstruction = erased_recon_open(j);
        InnerBoundPoint inner = inner_bound_open(j, aux, hamming);
        RDIPoint outer = outer_bound_open(j, aux, hamming);

        CHECK(inner.point.r == doctest::Approx(region.r).epsilon(1e-9).scale(1.0));
        CHECK(inner.point.delta == doctest::Approx(region.delta).epsilon(1e-9).scale(1.0));
        CHECK(inner.point.d == doctest::Approx(D).epsilon(1e-9).scale(1.0));
        CHECK(outer.r == doctest::Approx(region.r).epsilon(1e-9).scale(1.0));
        CHECK(outer.delta == doctest::Approx(region.delta).epsilon(1e-9).scale(1.0));
        CHECK(outer.d == doctest::Approx(D).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("tightness: log-loss open example") {
    JointPMF j = rdi_test::example_open(0.8, 0.5);
    const DistortionSpec ll = DistortionSpec::log_loss();
    CorollaryParams params;
    params.p_e = 0.8;
    params.z_bias = 0.5;
    const double h = 0.8;  // H(X|Y)

    for (double D : {0.0, 0.3, 0.6}) {
        RDIPoint region = corollary_region(CorollaryCase::logloss_open, params, D);
        AuxChannelSet aux = timeshare_aux(j, 1.0 - D / h);
        InnerBoundPoint inner = inner_bound_open(j, aux, ll);
        RDIPoint outer = outer_bound_open(j, aux, ll);
        CHECK(inner.point.r == doctest::Approx(region.r).epsilon(1e-9).scale(1.0));
        CHECK(inner.point.delta == doctest::Approx(region.delta).epsilon(1e-9).scale(1.0));
        CHECK(inner.point.d == doctest::Approx(D).epsilon(1e-9).scale(1.0));
        CHECK(outer.r == doctest::Approx(region.r).epsilon(1e-9).scale(1.0));
        CHECK(outer.delta == doctest::Approx(region.delta).epsilon(1e-9).scale(1.0));
    }
}

namespace {

// z_first chooses which side information resolves the source when present;
// the erased-Z family must consult Z, the double-erasure family either.
AuxChannelSet closed_bsc_aux(const JointPMF& source, double crossover, bool z_first) {
    ConditionalPMF v = lift_channel(make_bsc(crossover, "X", "V"),
                                    {Axis{"Y", source.alphabet_of("Y")}});
    AuxChannelSet aux{uv_channel(v), {}, {}};
    const int ny = source.alphabet_of("Y").size();
    const int nz = source.alphabet_of("Z").size();
    Reconstruction rec;
    rec.inputs = {"Y", "Z", "U", "V"};
    rec.xhat_size = 2;
    for (int y = 0; y < ny; ++y)
        for (int z = 0; z < nz; ++z)
            for (int v2 = 0; v2 < 2; ++v2) {
                int xh;
                if (z_first)
                    xh = z < 2 ? z : v2;
                else if (y < 2)
                    xh = y;
                else
                    xh = z < 2 ? z : v2;
                rec.table.push_back(xh);
            }
    aux.reconstruction = rec;
    return aux;
}

}  // namespace

TEST_CASE("tightness: erased-Z and double-erasure Hamming examples") {
    const DistortionSpec hamming = DistortionSpec::hamming(2);
    RDSolverConfig cfg;

    // Corollary with Z erased and degraded Y
    JointPMF coro3 = rdi_test::example_erased_z(0.8, 0.9);
    CorollaryParams p3;
    p3.p_e = 0.8;
    p3.y_bias = 0.9;
    for (double D : {0.0, 0.2}) {
        RDIPoint region = corollary_region(CorollaryCase::erased_z_hamming, p3, D);
        AuxChannelSet aux = closed_bsc_aux(coro3, D / 0.8, /*z_first=*/true);
        InnerBoundPoint inner = inner_bound_closed(coro3, aux, hamming);
        RDIPoint outer = outer_bound_closed(coro3, aux, hamming);
        CHECK(inner.point.r == doctest::Approx(region.r).epsilon(1e-9).scale(1.0));
        CHECK(inner.point.delta == doctest::Approx(region.delta).epsilon(1e-9).scale(1.0));
        CHECK(inner.point.d == doctest::Approx(D).epsilon(1e-9).scale(1.0));
        CHECK(outer.r == doctest::Approx(region.r).epsilon(1e-9).scale(1.0));
        CHECK(outer.delta == doctest::Approx(region.delta).epsilon(1e-9).scale(1.0));
        // region_closed agrees with the closed form
        RDIPoint rc = region_closed(coro3, hamming, D, cfg);
        CHECK(rc.r == doctest::Approx(region.r).epsilon(1e-4).scale(1.0));
        CHECK(rc.delta == doctest::Approx(region.delta).epsilon(1e-4).scale(1.0));
    }

    // both side informations erased
    JointPMF coro4 = rdi_test::example_double_erasure(0.9, 0.8);
    CorollaryParams p4;
    p4.p_ey = 0.9;
    p4.p_ez = 0.8;
    const double pp = 0.72;
    for (double D : {0.0, 0.2}) {
        RDIPoint region = corollary_region(CorollaryCase::double_erasure_hamming, p4, D);
        AuxChannelSet aux = closed_bsc_aux(coro4, D / pp, /*z_first=*/false);
        InnerBoundPoint inner = inner_bound_closed(coro4, aux, hamming);
        RDIPoint outer = outer_bound_closed(coro4, aux, hamming);
        CHECK(inner.point.r == doctest::Approx(region.r).epsilon(1e-9).scale(1.0));
        CHECK(inner.point.delta == doctest::Approx(region.delta).epsilon(1e-9).scale(1.0));
        CHECK(inner.point.d == doctest::Approx(D).epsilon(1e-9).scale(1.0));
        CHECK(outer.r == doctest::Approx(region.r).epsilon(1e-9).scale(1.0));
        CHECK(outer.delta == doctest::Approx(region.delta).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("tightness: log-loss closed example") {
    JointPMF j = rdi_test::example_double_erasure(0.9, 0.8);
    const DistortionSpec ll = DistortionSpec::log_loss();
    CorollaryParams p5;
    p5.p_ey = 0.9;
    p5.p_ez = 0.8;
    const double h = 0.72;  // H(X|Y,Z)
    for (double D : {0.0, 0.3, 0.6}) {
        RDIPoint region = corollary_region(CorollaryCase::logloss_closed, p5, D);
        ConditionalPMF v = lift_channel(make_timeshare_channel(Alphabet(2), 1.0 - D / h, "X", "V"),
                                        {Axis{"Y", j.alphabet_of("Y")}});
        AuxChannelSet aux{uv_channel(v), {}, {}};
        InnerBoundPoint inner = inner_bound_closed(j, aux, ll);
        RDIPoint outer = outer_bound_closed(j, aux, ll);
        CHECK(inner.point.r == doctest::Approx(region.r).epsilon(1e-9).scale(1.0));
        CHECK(inner.point.delta == doctest::Approx(region.delta).epsilon(1e-9).scale(1.0));
        CHECK(inner.point.d == doctest::Approx(D).epsilon(1e-9).scale(1.0));
        CHECK(outer.r == doctest::Approx(region.r).epsilon(1e-9).scale(1.0));
        CHECK(outer.delta == doctest::Approx(region.delta).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("closed switch with degenerate Z reduces to the open bounds") {
    // Z is a singleton: the closed-switch evaluators must agree with open.
    JointPMF xy = make_erasure_source(bern(0.5), 0.6, "Y");
    JointPMF j = extend(xy, make_constant_channel(
                                {Axis{"X", Alphabet(2)}, Axis{"Y", xy.alphabet_of("Y")}}, "Z"));
    const DistortionSpec hamming = DistortionSpec::hamming(2);
    AuxChannelSet aux = bsc_aux(j, 0.1);
    InnerBoundPoint open = inner_bound_open(j, aux, hamming);
    InnerBoundPoint closed = inner_bound_closed(j, aux, hamming);
    CHECK(open.point.r == doctest::Approx(closed.point.r).epsilon(1e-11));
    CHECK(open.point.delta == doctest::Approx(closed.point.delta).epsilon(1e-11));
}

TEST_CASE("corollary parameter validation") {
    CorollaryParams p;
    p.p_e = 0.8;
    CHECK_THROWS_AS(corollary_region(CorollaryCase::erased_y_hamming, p, 0.1), UsageError);
    p.z_bias = 0.5;
    CHECK_NOTHROW(corollary_region(CorollaryCase::erased_y_hamming, p, 0.1));
    CHECK_THROWS_AS(corollary_region(CorollaryCase::erased_y_hamming, p, 0.1, 0.5), UsageError);
    CHECK_THROWS_AS(corollary_region(CorollaryCase::helper_logloss, p, 0.1, 0.5), UsageError);
    CHECK_THROWS_AS(corollary_region(CorollaryCase::double_erasure_hamming, p, 0.1), UsageError);

    // double-erasure example rate at D = 0
    CorollaryParams p4;
    p4.p_ey = 0.9;
    p4.p_ez = 0.8;
    CHECK(corollary_region(CorollaryCase::double_erasure_hamming, p4, 0.0).r ==
          doctest::Approx(0.72).epsilon(1e-13));
    // rate crosses zero exactly at D = p_e/2
    CorollaryParams p1;
    p1.p_e = 0.8;
    p1.z_bias = 0.5;
    CHECK(corollary_region(CorollaryCase::erased_y_hamming, p1, 0.4).r == 0.0);
    CHECK(corollary_region(CorollaryCase::erased_y_hamming, p1, 0.39999).r > 0.0);

    // zero-rate helper
    CorollaryParams ph;
    ph.p_e = 0.8;
    ph.p_w = 0.5;
    RDIPoint hz = corollary_region(CorollaryCase::helper_logloss, ph, 0.1, 0.0);
    const double i_xw = 0.2 * 0.5;
    CHECK(hz.delta == doctest::Approx(i_xw + 0.8 - 0.1).epsilon(1e-12));
}

namespace {

// Chain Y - X - Z - W: Y = BSC(X), Z = erased X, W = erased Z.
JointPMF helper_chain_yxzw() {
    JointPMF xy = extend(bern(0.5), make_bsc(0.1, "X", "Y"));
    JointPMF xyz = extend(xy, make_erasure_channel(Alphabet(2), 0.5, "X", "Z"));
    return extend(xyz, make_erasure_channel(xyz.alphabet_of("Z"), 0.4, "Z", "W"));
}

// Chain Y - W - Z - X built from the X side: Z erases X, W erases Z, Y erases W.
JointPMF helper_chain_ywzx(double p_e = 0.8, double p_w = 0.5, double p_y = 0.3) {
    JointPMF xz = make_erasure_source(bern(0.5), p_e, "Z");
    JointPMF xzw = extend(xz, make_erasure_channel(xz.alphabet_of("Z"), p_w, "Z", "W"));
    return extend(xzw, make_erasure_channel(xzw.alphabet_of("W"), p_y, "W", "Y"));
}

}  // namespace

TEST_CASE("helper inner bound with empty auxiliaries") {
    JointPMF j = helper_chain_yxzw();
    std::vector<Axis> y_axis = {Axis{"Y", j.alphabet_of("Y")}};
    ConditionalPMF uh = make_constant_channel(y_axis, "Uh");
    std::vector<Axis> xuh = {Axis{"X", Alphabet(2)}, Axis{"Uh", Alphabet(1)}};
    ConditionalPMF uv = product_channel(make_constant_channel(xuh, "U"),
                                        make_constant_channel(xuh, "V"));
    AuxChannelSet aux{uv, uh, {}};
    HelperInnerBound hb = helper_inner_bound(j, aux, 0.5, DistortionSpec::log_loss());
    CHECK(hb.point.r == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(hb.r_h_required == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(hb.point.delta == doctest::Approx(mutual_information(j, {"X"}, {"W"})).epsilon(1e-11));
    CHECK_FALSE(hb.codeword_binning_used);
}

TEST_CASE("helper inner bound matches the log-loss helper region") {
    JointPMF j = helper_chain_yxzw();
    const double D = 0.1;
    std::vector<Axis> y_axis = {Axis{"Y", j.alphabet_of("Y")}};
    ConditionalPMF uh = make_bsc(0.2, "Y", "Uh");

    JointPMF with_uh = extend(j, uh);
    const double h_x_uhz = entropy(with_uh, {"X"}, {"Uh", "Z"});
    const double keep = 1.0 - D / h_x_uhz;
    std::vector<Axis> extra = {Axis{"Uh", Alphabet(2)}};
    ConditionalPMF v = lift_channel(make_timeshare_channel(Alphabet(2), keep, "X", "V"), extra);
    std::vector<Axis> xuh = {Axis{"X", Alphabet(2)}, Axis{"Uh", Alphabet(2)}};
    ConditionalPMF uv = product_channel(make_constant_channel(xuh, "U"), v);
    AuxChannelSet aux{uv, uh, {}};

    const double req = std::max(mutual_information(with_uh, {"Uh"}, {"Y"}, {"Z"}),
                                mutual_information(with_uh, {"Uh"}, {"Y"}, {"X"}));
    const double r_h = req + 0.05;
    HelperInnerBound hb = helper_inner_bound(j, aux, r_h, DistortionSpec::log_loss());
    CHECK(hb.key_from_codeword.satisfied);
    CHECK(hb.key_from_randomness.satisfied);
    CHECK(hb.key_sum.satisfied);
    // premise: both caps fully used, the sum cap not binding
    REQUIRE(hb.key_sum.slack >= -1e-12);

    RDSolverConfig cfg;
    cfg.restarts = 8;
    RDIPoint region = region_helper_logloss(j, r_h, D, cfg);
    CHECK(hb.point.delta == doctest::Approx(region.delta).epsilon(1e-9).scale(1.0));
    CHECK(hb.point.d == doctest::Approx(D).epsilon(1e-9).scale(1.0));

    // explicit key rates beyond their caps get flagged with the right slack
    KeyRates bad{hb.keys.r_k + 0.25, hb.keys.r_k_prime};
    HelperInnerBound flagged = helper_inner_bound(j, aux, r_h, DistortionSpec::log_loss(), bad);
    CHECK_FALSE(flagged.key_from_codeword.satisfied);
    CHECK(flagged.key_from_codeword.slack == doctest::Approx(hb.key_from_codeword.slack - 0.25));
}

TEST_CASE("helper regions: degraded chain closed forms") {
    const double p_e = 0.8, p_w = 0.5;
    JointPMF j = helper_chain_ywzx(p_e, p_w, 0.3);
    RDSolverConfig cfg;
    const double i_xw = mutual_information(j, {"X"}, {"W"});
    CHECK(i_xw == doctest::Approx((1 - p_e) * (1 - p_w)).epsilon(1e-12));

    // Hamming instance vs the closed-form corollary
    const DistortionSpec hamming = DistortionSpec::hamming(2);
    CorollaryParams ph;
    ph.p_e = p_e;
    ph.p_w = p_w;
    for (double rh : {0.05, 0.4}) {
        RDIPoint region = region_helper_degraded(j, hamming, rh, 0.2, cfg);
        RDIPoint closed = corollary_region(CorollaryCase::helper_erased_hamming, ph, 0.2, rh);
        CHECK(region.r == doctest::Approx(closed.r).epsilon(1e-4).scale(1.0));
        CHECK(region.delta == doctest::Approx(closed.delta).epsilon(1e-4).scale(1.0));
    }
    // log-loss instance
    const DistortionSpec ll = DistortionSpec::log_loss();
    RDIPoint rl = region_helper_degraded(j, ll, 0.1, 0.3, cfg);
    RDIPoint cl = corollary_region(CorollaryCase::helper_logloss, ph, 0.3, 0.1);
    CHECK(rl.r == doctest::Approx(cl.r).epsilon(1e-11).scale(1.0));
    CHECK(rl.delta == doctest::Approx(cl.delta).epsilon(1e-11).scale(1.0));
    // large helper rate hits the floor
    RDIPoint floor = region_helper_degraded(j, ll, 5.0, 0.1, cfg);
    CHECK(floor.delta == doctest::Approx(i_xw).epsilon(1e-11));

    CHECK_THROWS_AS(region_helper_degraded(helper_chain_yxzw(), ll, 0.1, 0.1, cfg),
                    PreconditionError);
}

TEST_CASE("helper log-loss region reductions") {
    JointPMF j = helper_chain_yxzw();
    RDSolverConfig cfg;
    cfg.restarts = 8;
    const double h_x_z = entropy(j, {"X"}, {"Z"});
    // zero helper rate: constant U_h
    RDIPoint r0 = region_helper_logloss(j, 0.0, 0.1, cfg);
    CHECK(r0.r == doctest::Approx(std::max(0.0, h_x_z - 0.1)).epsilon(1e-6).scale(1.0));
    // generous helper rate: U_h = Y is feasible
    const double h_y_z = entropy(j, {"Y"}, {"Z"});
    RDIPoint r1 = region_helper_logloss(j, h_y_z + 0.01, 0.0, cfg);
    CHECK(r1.r <= entropy(j, {"X"}, {"Y", "Z"}) + 1e-3);
    // branch switch exactly at r_h = H(X|Z) - D
    const double D = 0.1;
    const double rh_star = h_x_z - D;
    const double i_xw = mutual_information(j, {"X"}, {"W"});
    RDIPoint before = region_helper_logloss(j, rh_star - 0.05, D, cfg);
    RDIPoint after = region_helper_logloss(j, rh_star + 0.05, D, cfg);
    CHECK(before.delta == doctest::Approx(i_xw + 0.05).epsilon(1e-9).scale(1.0));
    CHECK(after.delta == doctest::Approx(i_xw).epsilon(1e-12).scale(1.0));
}

TEST_CASE("gaussian closed forms") {
    GaussianChainParams unit{GaussianChainParams::Ordering::w_z_x_y, 1.0, 1.0, 1.0, 1.0};
    GaussianRegion g = gaussian_region(unit, 0.5, 0.5);
    CHECK(g.point.r == doctest::Approx(0.2924812503605781).epsilon(1e-14));
    CHECK(g.point.delta == doctest::Approx(0.2924812503605781).epsilon(1e-14));
    CHECK_FALSE(g.rate_saturated);

    // dual route: conditional variance via the direct Gaussian algebra
    auto cond_var = [&](double rh) {
        if (rh == 0.0) return 1.0;  // var_b
        const double s2h = (1.0 + 1.0) / (std::exp2(2.0 * rh) - 1.0);
        return 1.0 - 1.0 / (1.0 + 1.0 + s2h);
    };
    for (double rh : {0.0, 0.5, 8.0}) {
        GaussianRegion at = gaussian_region(unit, rh, 0.25);
        const double expect = std::max(0.0, 0.5 * std::log2(cond_var(rh) / 0.25));
        CHECK(at.point.r == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
    }

    // boundary: D = var_b with r_h = 0 gives zero rate
    GaussianRegion edge = gaussian_region(unit, 0.0, 1.0);
    CHECK(edge.point.r == 0.0);

    // monotone in r_h down to the floor, with a single floor onset
    double prev = 1e9;
    bool floored = false;
    for (double rh = 0.0; rh <= 3.0; rh += 0.25) {
        GaussianRegion at = gaussian_region(unit, rh, 0.25);
        CHECK(at.point.r <= prev + 1e-12);
        const double second_term = 0.5 * std::log2(1.0 / (std::exp2(2.0 * rh) * 0.25));
        CHECK(at.delta_at_floor == (second_term <= 0.0));
        if (floored) CHECK(at.delta_at_floor);
        floored = at.delta_at_floor;
        prev = at.point.r;
    }

    // second ordering
    GaussianChainParams po{GaussianChainParams::Ordering::x_z_w_y, 1.0, 1.0, 1.0, 1.0};
    GaussianRegion g2 = gaussian_region(po, 0.25, 0.25);
    CHECK(g2.point.r == doctest::Approx(0.5).epsilon(1e-12));  // 0.5 log2(0.5/0.25)
    const double fl = 0.5 * std::log2(3.0 / 2.0);
    CHECK(g2.point.delta == doctest::Approx(std::max(fl, fl + 0.5 - 0.25)).epsilon(1e-12));

    CHECK_THROWS_AS(gaussian_region(unit, 0.5, 0.0), UsageError);
    GaussianChainParams bad = unit;
    bad.var_b = 0.0;
    CHECK_THROWS_AS(gaussian_region(bad, 0.5, 0.5), UsageError);
}

TEST_CASE("delta never drops below the eavesdropper floor") {
    auto rng = make_stream(77, 0);
    JointPMF j = rdi_test::example_open(0.7, 0.4);
    const DistortionSpec hamming = DistortionSpec::hamming(2);
    const double i_xz = mutual_information(j, {"X"}, {"Z"});
    for (int t = 0; t < 20; ++t) {
        ConditionalPMF v = lift_channel(
            rdi_test::random_channel(rng, Alphabet(2), 3, "X", "V"),
            {Axis{"Y", j.alphabet_of("Y")}});
        AuxChannelSet aux{uv_channel(v), {}, {}};
        CHECK(inner_bound_open(j, aux, hamming).point.delta >= i_xz - 1e-12);
        CHECK(outer_bound_open(j, aux, hamming).delta >= i_xz - 1e-12);
        CHECK(inner_bound_closed(j, aux, hamming).point.delta >= i_xz - 1e-12);
        CHECK(outer_bound_closed(j, aux, hamming).delta >= i_xz - 1e-12);
    }
}

TEST_CASE("region_closed equals region_open_markov on the merged super source") {
    JointPMF j = rdi_test::example_double_erasure(0.9, 0.8);
    RDSolverConfig cfg;

    // merge (Y, Z) into a super side information axis named Y, duplicate Z
    JointPMF merged = j.marginal({"X", "Y", "Z"}).merge_axes({"Y", "Z"}, "Y");
    const int nz = 3;
    ConditionalPMF dup = deterministic_channel(
        {Axis{"Y", merged.alphabet_of("Y")}}, Axis{"Z", Alphabet(nz)},
        [&](const std::vector<int>& sym) { return sym[0] % nz; });
    JointPMF super = extend(merged, dup);

    const DistortionSpec ll = DistortionSpec::log_loss();
    RDIPoint closed = region_closed(j, ll, 0.3, cfg);
    RDIPoint open = region_open_markov(super, ll, 0.3, cfg);
    CHECK(open.r == doctest::Approx(closed.r).epsilon(1e-9).scale(1.0));
    CHECK(open.delta == doctest::Approx(closed.delta).epsilon(1e-9).scale(1.0));

    const DistortionSpec hamming = DistortionSpec::hamming(2);
    RDIPoint closed_h = region_closed(j, hamming, 0.1, cfg);
    RDIPoint open_h = region_open_markov(super, hamming, 0.1, cfg);
    CHECK(open_h.r == doctest::Approx(closed_h.r).epsilon(1e-6).scale(1.0));
    CHECK(open_h.delta == doctest::Approx(closed_h.delta).epsilon(1e-6).scale(1.0));
}

TEST_CASE("no-encoder-side-information remark: both leakage forms coincide") {
    // With V - X - Z, I(X;Z) + I(V;X) equals I(X;Z,V) + I(V;Z).
    auto rng = make_stream(99, 0);
    for (int t = 0; t < 30; ++t) {
        JointPMF x = rdi_test::random_joint(rng, {3}, {"X"});
        JointPMF xv = extend(x, rdi_test::random_channel(rng, Alphabet(3), 3, "X", "V"));
        JointPMF j = extend(xv, rdi_test::random_channel(rng, Alphabet(3), 2, "X", "Z"));
        const double a = mutual_information(j, {"X"}, {"Z"}) + mutual_information(j, {"V"}, {"X"});
        const double b = mutual_information(j, {"X"}, {"Z", "V"}) +
                         mutual_information(j, {"V"}, {"Z"});
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
    }
}

TEST_CASE("corollary curves have one kink and reach the floor") {
    CorollaryParams p3;
    p3.p_e = 0.8;
    p3.y_bias = 0.9;
    double floor_val = corollary_region(CorollaryCase::erased_z_hamming, p3, 10.0).delta;
    CHECK(floor_val == doctest::Approx(0.2).epsilon(1e-12));
    int transitions = 0;
    bool prev_above = true;
    double prev_delta = 1e9, prev_r = 1e9;
    for (int i = 0; i <= 100; ++i) {
        const double D = 0.5 * i / 100.0;
        RDIPoint pt = corollary_region(CorollaryCase::erased_z_hamming, p3, D);
        const bool above = pt.delta > floor_val + 1e-12;
        if (prev_above != above && i > 0) ++transitions;
        prev_above = above;
        CHECK(pt.delta <= prev_delta + 1e-12);
        CHECK(pt.r <= prev_r + 1e-12);
        prev_delta = pt.delta;
        prev_r = pt.r;
    }
    CHECK(transitions == 1);
}

TEST_CASE("check_si_equality V* feeds the bound evaluators") {
    JointPMF j = rdi_test::example_open(0.8, 0.5);
    RDSolverConfig cfg;
    const DistortionSpec ll = DistortionSpec::log_loss();
    SIEqualityReport rep = check_si_equality(j, "X", {"Y"}, ll, {0.3}, cfg);
    REQUIRE(rep.verdict);
    REQUIRE(rep.points.size() == 1);

    ConditionalPMF v = lift_channel(rep.points[0].v_channel, {Axis{"Y", j.alphabet_of("Y")}});
    AuxChannelSet aux{uv_channel(v), {}, {}};
    RDIPoint region = region_open_markov(j, ll, 0.3, cfg);
    RDIPoint outer = outer_bound_open(j, aux, ll);
    InnerBoundPoint inner = inner_bound_open(j, aux, ll);
    CHECK(outer.r == doctest::Approx(region.r).epsilon(1e-9).scale(1.0));
    CHECK(outer.delta == doctest::Approx(region.delta).epsilon(1e-9).scale(1.0));
    CHECK(outer.d == doctest::Approx(0.3).epsilon(1e-9).scale(1.0));
    CHECK(inner.point.r == doctest::Approx(region.r).epsilon(1e-9).scale(1.0));
    CHECK(inner.point.delta == doctest::Approx(region.delta).epsilon(1e-9).scale(1.0));
}

TEST_CASE("degenerate side information reduces the inner bound") {
    // Y is a singleton: the key disappears and the leakage is I(X;Z,U)+I(V;X|U).
    auto rng = make_stream(123, 0);
    JointPMF x = rdi_test::random_joint(rng, {3}, {"X"});
    JointPMF xy = extend(x, make_constant_channel({Axis{"X", Alphabet(3)}}, "Y"));
    JointPMF j = extend(xy, rdi_test::random_channel(rng, Alphabet(3), 2, "X", "Z"));
    ConditionalPMF v = lift_channel(rdi_test::random_channel(rng, Alphabet(3), 2, "X", "V"),
                                    {Axis{"Y", Alphabet(1)}});
    AuxChannelSet aux{uv_channel(v), {}, {}};
    InnerBoundPoint inner = inner_bound_open(j, aux, DistortionSpec::hamming(3));
    CHECK(inner.key_rate == doctest::Approx(0.0).epsilon(1e-12));
    const double expect = mutual_information(j, {"X"}, {"Z"}) +
                          mutual_information(extend(j, aux.uv), {"V"}, {"X"});
    CHECK(inner.point.delta == doctest::Approx(expect).epsilon(1e-10));
    CHECK(inner.point.r ==
          doctest::Approx(mutual_information(extend(j, aux.uv), {"X"}, {"V"})).epsilon(1e-10));
}

TEST_CASE("helper degraded region is monotone in the helper rate with one kink") {
    JointPMF j = helper_chain_ywzx(0.8, 0.5, 0.3);
    RDSolverConfig cfg;
    const DistortionSpec ll = DistortionSpec::log_loss();
    const double i_xw = mutual_information(j, {"X"}, {"W"});
    double prev = 1e9;
    int transitions = 0;
    bool prev_above = true;
    for (int i = 0; i <= 40; ++i) {
        const double rh = i / 40.0;
        RDIPoint pt = region_helper_degraded(j, ll, rh, 0.2, cfg);
        CHECK(pt.delta <= prev + 1e-12);
        const bool above = pt.delta > i_xw + 1e-12;
        if (i > 0 && above != prev_above) ++transitions;
        prev_above = above;
        prev = pt.delta;
    }
    CHECK(transitions == 1);
}

TEST_CASE("closed-switch trivial reductions") {
    JointPMF j = rdi_test::example_erased_z(0.8, 0.9);
    const DistortionSpec hamming = DistortionSpec::hamming(2);
    const double i_xz = mutual_information(j, {"X"}, {"Z"});

    // empty auxiliaries
    std::vector<Axis> given = {Axis{"X", j.alphabet_of("X")}, Axis{"Y", j.alphabet_of("Y")}};
    ConditionalPMF u = make_constant_channel(given, "U");
    ConditionalPMF vempty = make_constant_channel(given, "V");
    AuxChannelSet none{product_channel(u, vempty), {}, {}};
    InnerBoundPoint inner = inner_bound_closed(j, none, hamming);
    CHECK(inner.point.r == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(inner.point.delta == doctest::Approx(i_xz).epsilon(1e-12));
    RDIPoint outer = outer_bound_closed(j, none, hamming);
    CHECK(outer.r == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(outer.delta == doctest::Approx(i_xz).epsilon(1e-12));

    // V = X reveals everything: R = H(X|Y,Z)
    ConditionalPMF vx = lift_channel(make_identity_channel(Alphabet(2), "X", "V"),
                                     {Axis{"Y", j.alphabet_of("Y")}});
    AuxChannelSet all{product_channel(u, vx), {}, {}};
    RDIPoint full = outer_bound_closed(j, all, hamming);
    CHECK(full.r == doctest::Approx(entropy(j, {"X"}, {"Y", "Z"})).epsilon(1e-11));
    CHECK(full.d == doctest::Approx(0.0).epsilon(1e-12));

    // U must stay a singleton for the closed outer bound
    ConditionalPMF ubig = lift_channel(make_bsc(0.1, "X", "U"), {Axis{"Y", j.alphabet_of("Y")}});
    AuxChannelSet bad{product_channel(ubig, vempty), {}, {}};
    CHECK_THROWS_AS(outer_bound_closed(j, bad, hamming), UsageError);

    // log-loss region saturates once D reaches H(X|Y,Z)
    RDSolverConfig cfg;
    const double h = entropy(j, {"X"}, {"Y", "Z"});
    RDIPoint sat = region_closed(j, DistortionSpec::log_loss(), h + 0.05, cfg);
    CHECK(sat.r == 0.0);
}

TEST_CASE("helper log-loss region with an uninformed eavesdropper") {
    // W is a singleton: the leakage floor vanishes and a generous helper
    // budget drives the rate down to the fully-informed value.
    JointPMF xy = extend(bern(0.5), make_bsc(0.1, "X", "Y"));
    JointPMF xyz = extend(xy, make_erasure_channel(Alphabet(2), 0.5, "X", "Z"));
    JointPMF j = extend(xyz, make_constant_channel(
                                 {Axis{"X", Alphabet(2)}, Axis{"Y", Alphabet(2)}}, "W"));
    RDSolverConfig cfg;
    cfg.restarts = 8;
    const double budget = std::max(entropy(j, {"Y"}, {"Z"}), entropy(j, {"X"}, {"Z"})) + 0.01;
    RDIPoint pt = region_helper_logloss(j, budget, 0.0, cfg);
    CHECK(pt.r <= entropy(j, {"X"}, {"Y", "Z"}) + 1e-3);
    CHECK(pt.r >= entropy(j, {"X"}, {"Y", "Z"}) - 1e-9);
    CHECK(pt.delta == doctest::Approx(0.0).epsilon(1e-12));
}
