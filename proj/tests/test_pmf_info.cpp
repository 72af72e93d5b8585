#include <doctest.h>

#include <cmath>

#include "rdi/channels.hpp"
#include "rdi/info.hpp"
#include "rdi/pmf.hpp"
#include "test_util.hpp"

using namespace rdi;
using rdi_test::bern;

TEST_CASE("alphabet invariants") {
    CHECK_THROWS_AS(Alphabet(0), UsageError);
    CHECK_THROWS_AS(Alphabet(2, {"a"}), UsageError);
    CHECK_THROWS_AS(Alphabet(2, {"a", "a"}), UsageError);
    Alphabet a(3);
    CHECK(a.label(2) == "2");
}

TEST_CASE("joint pmf validation") {
    Alphabet b(2);
    CHECK_THROWS_AS(JointPMF({Axis{"X", b}}, {0.5, 0.6}), UsageError);
    CHECK_THROWS_AS(JointPMF({Axis{"X", b}}, {-0.1, 1.1}), UsageError);
    CHECK_THROWS_AS(JointPMF({Axis{"X", b}, Axis{"X", b}}, {0.25, 0.25, 0.25, 0.25}), UsageError);
    JointPMF p({Axis{"X", b}, Axis{"Y", b}}, {0.1, 0.2, 0.3, 0.4});
    CHECK(p.cell_count() == 4);
    CHECK_THROWS_AS(p.axis_index("W"), UsageError);
}

TEST_CASE("entropy basics") {
    // uniform binary
    CHECK(entropy(bern(0.5), {"X"}) == doctest::Approx(1.0).epsilon(1e-12));
    // deterministic copy
    JointPMF xx = extend(bern(0.5), make_identity_channel(Alphabet(2), "X", "Y"));
    CHECK(entropy(xx, {"X"}, {"Y"}) == doctest::Approx(0.0).epsilon(1e-12));
    // erased source: H(X|Y) = p_e, checked against the direct 2x3 sum
    JointPMF xy = make_erasure_source(bern(0.5), 0.8, "Y");
    double direct = 0.0;
    const double cells[] = {0.1, 0.1, 0.4, 0.4};  // nonzero entries of p(x,y)
    const double ymarg[] = {0.1, 0.1, 0.8, 0.8};
    for (int i = 0; i < 4; ++i) direct -= cells[i] * std::log2(cells[i] / ymarg[i]);
    CHECK(direct == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(entropy(xy, {"X"}, {"Y"}) == doctest::Approx(direct).epsilon(1e-13));
    CHECK_THROWS_AS(entropy(xy, {"X"}, {"X"}), UsageError);
    CHECK_THROWS_AS(entropy(xy, {"Q"}), UsageError);
}

TEST_CASE("mutual information basics") {
    auto rng = make_stream(7, 0);
    JointPMF indep = extend(bern(0.3), make_constant_channel({Axis{"X", Alphabet(2)}}, "U"));
    CHECK(mutual_information(indep, {"X"}, {"U"}) == doctest::Approx(0.0).epsilon(1e-12));
    JointPMF copy = extend(bern(0.5), make_identity_channel(Alphabet(2), "X", "Y"));
    CHECK(mutual_information(copy, {"X"}, {"Y"}) == doctest::Approx(1.0).epsilon(1e-12));
    // Switch-open example: I(X;Z) = 1 - H2(0.4)
    JointPMF j = rdi_test::example_open(0.8, 0.5);
    CHECK(mutual_information(j, {"X"}, {"Z"}) ==
          doctest::Approx(0.029049405545331361).epsilon(1e-12));
    CHECK_THROWS_AS(mutual_information(j, {"X"}, {"X"}), UsageError);
    (void)rng;
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.4) == doctest::Approx(0.9709505944546686).epsilon(1e-15));
    CHECK(binary_entropy(0.3) == doctest::Approx(binary_entropy(0.7)).epsilon(1e-15));
    CHECK_THROWS_AS(binary_entropy(-0.1), UsageError);
    CHECK_THROWS_AS(binary_entropy(1.1), UsageError);
}

TEST_CASE("markov chain checks") {
    auto rng = make_stream(13, 0);
    for (int t = 0; t < 20; ++t) {
        JointPMF chain = rdi_test::random_chain(rng);
        MarkovCheck mc = check_markov(chain, std::vector<std::string>{"X", "Y", "Z"}, 1e-9);
        CHECK(mc.holds);
    }
    // X = Z uniform, Y independent: violation about 1/2
    JointPMF xz = extend(bern(0.5), make_identity_channel(Alphabet(2), "X", "Z"));
    ConditionalPMF coin({}, {Axis{"Y", Alphabet(2)}}, {0.5, 0.5});
    JointPMF full = extend(xz, coin);
    MarkovCheck mc = check_markov(full, std::vector<std::string>{"X", "Y", "Z"}, 1e-9);
    CHECK_FALSE(mc.holds);
    CHECK(mc.max_violation == doctest::Approx(0.5).epsilon(1e-9));
    // Erased-Z corollary joint satisfies X - Z - Y
    MarkovCheck coro = check_markov(rdi_test::example_erased_z(), std::vector<std::string>{"X", "Z", "Y"}, 1e-9);
    CHECK(coro.holds);
    CHECK_THROWS_AS(check_markov(full, std::vector<std::string>{"X", "Y"}, 1e-9), UsageError);
}

TEST_CASE("erasure source construction") {
    JointPMF same = make_erasure_source(bern(0.5), 0.0, "Y");
    CHECK(entropy(same, {"X"}, {"Y"}) == doctest::Approx(0.0).epsilon(1e-12));
    JointPMF gone = make_erasure_source(bern(0.5), 1.0, "Y");
    CHECK(mutual_information(gone, {"X"}, {"Y"}) == doctest::Approx(0.0).epsilon(1e-12));
    JointPMF j = make_erasure_source(bern(0.5), 0.8, "Y");
    JointPMF y = j.marginal({"Y"});
    CHECK(y.prob(0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(y.prob(1) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(y.prob(2) == doctest::Approx(0.8).epsilon(1e-15));
    JointPMF x = j.marginal({"X"});
    CHECK(x.prob(0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("chain rule property") {
    auto rng = make_stream(101, 0);
    for (int t = 0; t < 100; ++t) {
        JointPMF j = rdi_test::random_joint(rng, {2, 2, 2, 2}, {"A", "B", "C", "D"});
        const double lhs = mutual_information(j, {"A"}, {"B", "C"}, {"D"});
        const double rhs = mutual_information(j, {"A"}, {"C"}, {"D"}) +
                           mutual_information(j, {"A"}, {"B"}, {"C", "D"});
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        CHECK(mutual_information(j, {"A"}, {"B"}, {"C", "D"}) >= -1e-12);
        CHECK(entropy(j, {"A"}, {"B"}) >= -1e-12);
    }
}

TEST_CASE("data processing on composed chains") {
    auto rng = make_stream(202, 0);
    for (int t = 0; t < 50; ++t) {
        JointPMF chain = rdi_test::random_chain(rng, 3, 2, 3);
        CHECK(mutual_information(chain, {"X"}, {"Z"}) <=
              mutual_information(chain, {"X"}, {"Y"}) + 1e-9);
    }
}

TEST_CASE("conditional with zero slices is uniform and flagged") {
    // p(x, y): y = 1 never occurs together with x = 1.
    JointPMF j({Axis{"X", Alphabet(2)}, Axis{"Y", Alphabet(2)}}, {0.5, 0.5, 0.0, 0.0});
    ConditionalPMF c = conditional(j, {"Y"}, {"X"});
    CHECK(c.uniform_fill_used());
    CHECK(c.prob(1, 0) == doctest::Approx(0.5));
    CHECK(c.prob(1, 1) == doctest::Approx(0.5));
    ConditionalPMF ok = conditional(j, {"X"}, {});
    CHECK_FALSE(ok.uniform_fill_used());
}

TEST_CASE("capacity guard") {
    // 10 axes of size 8 = 8^10 > 1e8 cells.
    std::vector<Axis> axes;
    for (int i = 0; i < 10; ++i) axes.push_back(Axis{"V" + std::to_string(i), Alphabet(8)});
    CHECK_THROWS_AS(JointPMF(std::move(axes), std::vector<double>{}), CapacityError);
}

TEST_CASE("json round trip preserves values") {
    auto rng = make_stream(33, 0);
    JointPMF j = rdi_test::random_joint(rng, {2, 3}, {"X", "Y"});
    JointPMF back = JointPMF::from_json(j.to_json());
    REQUIRE(back.cell_count() == j.cell_count());
    for (std::size_t c = 0; c < j.cell_count(); ++c) {
        const double a = j.prob(c), b = back.prob(c);
        CHECK(std::abs(a - b) <= 1e-15 * std::max(1.0, std::abs(a)));
    }
    CHECK(back.axes()[0].name == "X");
    CHECK(back.axes()[1].alphabet.size() == 3);
}

TEST_CASE("merge axes regroups variables") {
    JointPMF j = rdi_test::example_open();
    JointPMF merged = j.merge_axes({"Y", "Z"}, "YZ");
    CHECK(merged.has_axis("YZ"));
    CHECK(merged.alphabet_of("YZ").size() == 6);
    CHECK(entropy(merged, {"X"}, {"YZ"}) ==
          doctest::Approx(entropy(j, {"X"}, {"Y", "Z"})).epsilon(1e-12));
}

TEST_CASE("serialized joint uses the documented field layout") {
    JointPMF j = make_erasure_source(bern(0.5), 0.8, "Y");
    const std::string text = j.to_json();
    CHECK(text.find("\"axes\"") != std::string::npos);
    CHECK(text.find("\"probs\"") != std::string::npos);
    CHECK(text.find("\"name\"") != std::string::npos);
    CHECK(text.find("\"size\"") != std::string::npos);
    CHECK(text.find("\"labels\"") != std::string::npos);
}
