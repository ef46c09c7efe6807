#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracle.hpp"
#include "qaemu/ising.hpp"
#include "test_util.hpp"

using namespace qaemu;

TEST_CASE("energy matches hand evaluation and the brute-force oracle") {
    const IsingModel model(3, {0.5, -0.5, 0.0},
                           {{0, 1, 1.0}, {0, 2, -1.0}, {1, 2, 0.5}});
    const SpinState state(std::vector<std::int8_t>{1, -1, 1});
    CHECK(energy(model, state) == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(energy(model, state) ==
          doctest::Approx(oracle::ising_energy(oracle::densify(model), {1, -1, 1})));
}

TEST_CASE("zero model has zero energy for every state") {
    const IsingModel model(4, {0, 0, 0, 0}, {});
    for (std::uint64_t x = 0; x < 16; ++x)
        CHECK(energy(model, basis_state(4, x)) == 0.0);
}

TEST_CASE("two-spin ferromagnet energy") {
    const IsingModel model(2, {0, 0}, {{0, 1, -1.0}});
    CHECK(energy(model, SpinState::from_string("++")) == -1.0);
}

TEST_CASE("energy rejects dimension mismatch") {
    const IsingModel model(2, {0, 0}, {});
    CHECK_THROWS_WITH_AS(energy(model, SpinState::from_string("+++")),
                         doctest::Contains("dimension mismatch"), std::invalid_argument);
}

TEST_CASE("random models agree with the oracle energy") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto model = testutil::random_model(seed, 8, 0.6);
        const auto dense = oracle::densify(model);
        for (std::uint64_t x = 0; x < 256; x += 7) {
            const auto spins = oracle::basis_spins(8, x);
            CHECK(energy(model, basis_state(8, x)) ==
                  doctest::Approx(oracle::ising_energy(dense, spins)).epsilon(1e-12));
        }
    }
}

TEST_CASE("model construction normalizes and validates weights") {
    // Lower-triangular keys fold into (i, j); duplicates accumulate.
    const IsingModel model(3, {0, 0, 0}, {{2, 0, 1.5}, {0, 2, 0.5}});
    REQUIRE(model.couplings().size() == 1);
    CHECK(model.couplings()[0].i == 0);
    CHECK(model.couplings()[0].j == 2);
    CHECK(model.couplings()[0].value == doctest::Approx(2.0));

    CHECK_THROWS_AS(IsingModel(2, {0.0}, {}), std::invalid_argument);
    CHECK_THROWS_AS(IsingModel(2, {0, 0}, {{0, 0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(IsingModel(2, {0, 0}, {{0, 2, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(IsingModel(2, {0, std::nan("")}, {}), std::invalid_argument);
}

TEST_CASE("exact distribution of the two-spin ferromagnet at beta=1") {
    const IsingModel model(2, {0, 0}, {{0, 1, -1.0}});
    const auto table = exact_distribution(model, 1.0);
    REQUIRE(table.size() == 4);

    // Frozen from the 4-state enumeration: Z = 2e + 2/e = 6.172323.
    CHECK(table.prob_of(SpinState::from_string("--")) == doctest::Approx(0.4403985).epsilon(1e-5));
    CHECK(table.prob_of(SpinState::from_string("++")) == doctest::Approx(0.4403985).epsilon(1e-5));
    CHECK(table.prob_of(SpinState::from_string("+-")) == doctest::Approx(0.0596015).epsilon(1e-5));
    CHECK(table.prob_of(SpinState::from_string("-+")) == doctest::Approx(0.0596015).epsilon(1e-5));
    REQUIRE(table.log_z().has_value());
    CHECK(std::exp(*table.log_z()) == doctest::Approx(6.172323).epsilon(1e-6));

    const auto p = oracle::boltzmann(oracle::densify(model), 1.0);
    for (std::uint64_t x = 0; x < 4; ++x)
        CHECK(table.prob_of(basis_state(2, x)) == doctest::Approx(p[x]).epsilon(1e-12));
}

TEST_CASE("beta=0 gives the uniform distribution") {
    const auto model = testutil::random_model(3, 5);
    const auto table = exact_distribution(model, 0.0);
    for (const auto& [state, prob] : table.entries())
        CHECK(prob == doctest::Approx(1.0 / 32).epsilon(1e-12));
}

TEST_CASE("single free spin is a fair coin") {
    const IsingModel model(1, {0.0}, {});
    const auto table = exact_distribution(model, 1.0);
    CHECK(table.prob_of(SpinState::from_string("+")) == doctest::Approx(0.5));
    CHECK(table.prob_of(SpinState::from_string("-")) == doctest::Approx(0.5));
}

TEST_CASE("exact distribution enforces the enumeration guard") {
    const IsingModel big(25, std::vector<double>(25, 0.0), {});
    CHECK_THROWS_WITH_AS(exact_distribution(big, 1.0),
                         doctest::Contains("enumeration limit exceeded"), std::invalid_argument);
    CHECK_THROWS_AS(exact_distribution(testutil::random_model(0, 3), -0.5),
                    std::invalid_argument);
}

TEST_CASE("distribution mass is 1 within 1e-12 across sizes and betas") {
    for (const double beta : {0.0, 0.7, 3.1, 10.0}) {
        for (const std::size_t n : {1u, 4u, 9u, 14u}) {
            const auto table = exact_distribution(testutil::random_model(n, n), beta);
            CHECK(std::abs(table.total_mass() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("global spin flip symmetry when h = 0") {
    std::vector<CouplingEntry> couplings{{0, 1, 0.8}, {1, 2, -0.3}, {0, 3, 0.5}};
    const IsingModel model(4, {0, 0, 0, 0}, couplings);
    const auto table = exact_distribution(model, 1.3);
    for (std::uint64_t x = 0; x < 16; ++x) {
        const auto flipped = basis_state(4, ~x & 0xF);
        CHECK(table.prob_of(basis_state(4, x)) ==
              doctest::Approx(table.prob_of(flipped)).epsilon(1e-12));
    }
}

TEST_CASE("offset shifts Z but not the probabilities") {
    const auto base = testutil::random_model(11, 6);
    const IsingModel shifted(base.num_spins(), base.h(), base.couplings(), base.offset() + 2.5);
    const double beta = 0.9;
    const auto t0 = exact_distribution(base, beta);
    const auto t1 = exact_distribution(shifted, beta);
    CHECK(*t1.log_z() == doctest::Approx(*t0.log_z() - beta * 2.5).epsilon(1e-12));
    for (const auto& [state, prob] : t0.entries())
        CHECK(t1.prob_of(state) == doctest::Approx(prob).epsilon(1e-12));
}

TEST_CASE("diagonal energies follow the basis-order convention") {
    const IsingModel single(1, {0.7}, {});
    const auto d1 = diagonal_energies(single);
    REQUIRE(d1.size() == 2);
    CHECK(d1[0] == doctest::Approx(-0.7));  // x=0 -> S=-1
    CHECK(d1[1] == doctest::Approx(+0.7));

    const IsingModel zero(3, {0, 0, 0}, {});
    for (const double e : diagonal_energies(zero)) CHECK(e == 0.0);

    const IsingModel ferro(2, {0, 0}, {{0, 1, -1.0}});
    const auto d2 = diagonal_energies(ferro);
    REQUIRE(d2.size() == 4);
    CHECK(d2[0] == doctest::Approx(-1.0));
    CHECK(d2[1] == doctest::Approx(+1.0));
    CHECK(d2[2] == doctest::Approx(+1.0));
    CHECK(d2[3] == doctest::Approx(-1.0));
}

TEST_CASE("diagonal energies equal energy(model, 2x-1) for random models") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t n = 2 + seed % 9;
        const auto model = testutil::random_model(seed + 100, n, 0.5);
        const auto diag = diagonal_energies(model);
        REQUIRE(diag.size() == (std::size_t{1} << n));
        for (std::uint64_t x = 0; x < diag.size(); ++x)
            CHECK(diag[x] == doctest::Approx(energy(model, basis_state(n, x))).epsilon(1e-12));
    }
}

TEST_CASE("diagonal energies enforce the N <= 12 guard") {
    const IsingModel big(13, std::vector<double>(13, 0.0), {});
    CHECK_THROWS_WITH_AS(diagonal_energies(big), doctest::Contains("enumeration limit"),
                         std::invalid_argument);
}

TEST_CASE("qubo/ising conversion endpoints") {
    // x = 0 <-> S = -1, x = 1 <-> S = +1 for a single variable.
    const IsingModel qubo(1, {1.0}, {}, 0.0);  // E(x) = x
    const auto ising = qubo_to_ising(qubo);
    CHECK(energy(ising, SpinState::from_string("-")) == doctest::Approx(0.0));
    CHECK(energy(ising, SpinState::from_string("+")) == doctest::Approx(1.0));
}

TEST_CASE("qubo -> ising -> qubo round-trips the coefficients") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto qubo = testutil::random_model(seed + 40, 6, 0.7);
        const auto back = ising_to_qubo(qubo_to_ising(qubo));
        REQUIRE(back.couplings().size() == qubo.couplings().size());
        for (std::size_t i = 0; i < qubo.num_spins(); ++i)
            CHECK(back.h()[i] == doctest::Approx(qubo.h()[i]).epsilon(1e-12));
        for (std::size_t k = 0; k < qubo.couplings().size(); ++k)
            CHECK(back.couplings()[k].value ==
                  doctest::Approx(qubo.couplings()[k].value).epsilon(1e-12));
        CHECK(back.offset() == doctest::Approx(qubo.offset()).epsilon(1e-12));
    }
}

TEST_CASE("conversion preserves all energies state-by-state") {
    const auto qubo = testutil::random_model(7, 3);
    const auto ising = qubo_ising_convert(ConvertDirection::QuboToIsing, qubo);
    const auto dense = oracle::densify(qubo);
    for (std::uint64_t x = 0; x < 8; ++x) {
        const double e_qubo = oracle::qubo_energy(dense, oracle::basis_bits(3, x));
        const double e_ising = energy(ising, basis_state(3, x));
        CHECK(e_qubo == doctest::Approx(e_ising).epsilon(1e-12));
    }

    const auto back = qubo_ising_convert(ConvertDirection::IsingToQubo, ising);
    const auto dense_back = oracle::densify(back);
    for (std::uint64_t x = 0; x < 8; ++x)
        CHECK(oracle::qubo_energy(dense_back, oracle::basis_bits(3, x)) ==
              doctest::Approx(energy(ising, basis_state(3, x))).epsilon(1e-12));
}

TEST_CASE("spin state parsing and printing") {
    const auto s = SpinState::from_string("+-+");
    CHECK(s.size() == 3);
    CHECK(s.spin(0) == 1);
    CHECK(s.spin(1) == -1);
    CHECK(s.to_string() == "+-+");
    CHECK_THROWS_AS(SpinState::from_string("+0-"), std::invalid_argument);
}

TEST_CASE("fingerprints distinguish models and ignore nothing") {
    const auto a = testutil::random_model(1, 5);
    const auto b = testutil::random_model(2, 5);
    CHECK(a.fingerprint() != b.fingerprint());
    const IsingModel copy(a.num_spins(), a.h(), a.couplings(), a.offset());
    CHECK(copy.fingerprint() == a.fingerprint());
    const IsingModel shifted(a.num_spins(), a.h(), a.couplings(), a.offset() + 1.0);
    CHECK(shifted.fingerprint() != a.fingerprint());
}
