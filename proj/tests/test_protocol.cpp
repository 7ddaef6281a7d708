#include "doctest.h"

#include <cmath>
#include <vector>

#include "iontomo/protocol.hpp"
#include "oracles.hpp"

using namespace iontomo;

namespace {

Vector ket(const HilbertDims& dims, Level e, int nx, int nz)
{
    Vector v = Vector::Zero(dims.dim());
    v(dims.index(e, nx, nz)) = 1.0;
    return v;
}

ProtocolSettings settings_for(int cutoff, VMode mode = VMode::ideal)
{
    ProtocolSettings s;
    s.dims = HilbertDims(cutoff, cutoff);
    s.v_mode = mode;
    return s;
}

} // namespace

TEST_CASE("initial state preparation")
{
    const HilbertDims dims(6, 6);
    const auto phi = coherent(Complex(0.3, 0.4), 6);
    const auto rho = prepare_initial(phi, dims);
    CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(oracle::max_abs(reduce_to_mode_x(rho.matrix(), dims) - phi.density()) < 1e-14);
    CHECK(std::abs(rho.matrix()(dims.index(Level::minus, 0, 0), dims.index(Level::minus, 0, 0)) -
                   phi.element(0, 0)) < 1e-15);

    CHECK_THROWS_AS(prepare_initial(phi, HilbertDims(5, 5)), Error);
    try {
        prepare_initial(coherent(2.5, 6, 0.5), dims);
        FAIL("expected leakage");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::truncation_leakage);
    }
}

TEST_CASE("U00 pulse sequence")
{
    const HilbertDims dims(4, 4);

    SUBCASE("vacuum input")
    {
        const Vector out = u00(dims).matrix() * ket(dims, Level::minus, 0, 0);
        const Vector expected = (ket(dims, Level::minus, 0, 0) + ket(dims, Level::plus, 0, 0)) / std::sqrt(2.0);
        CHECK((out - expected).norm() < 1e-12);
    }

    SUBCASE("one phonon is copied into mode z on the + branch")
    {
        const Vector out = u00(dims).matrix() * ket(dims, Level::minus, 1, 0);
        const Vector expected = (ket(dims, Level::minus, 1, 0) + ket(dims, Level::plus, 0, 1)) / std::sqrt(2.0);
        CHECK((out - expected).norm() < 1e-12);
    }

    SUBCASE("after the first two pulses")
    {
        const auto pulses = u00_schedule();
        REQUIRE(pulses.size() == 4);
        const std::vector<PulseSpec> head(pulses.begin(), pulses.begin() + 2);
        const Vector out = compile_schedule(head, dims).matrix() * ket(dims, Level::minus, 2, 0);
        const Vector expected = ket(dims, Level::minus, 2, 0) / std::sqrt(2.0) +
                                (ket(dims, Level::plus, 2, 0) + ket(dims, Level::xi, 2, 0)) / 2.0;
        CHECK((out - expected).norm() < 1e-12);
    }

    SUBCASE("leaves no xi population for an arbitrary input")
    {
        const auto phi = coherent(Complex(0.2, -0.5), 4, 0.05);
        const Vector in = prepare_initial_pure(phi, dims).amplitudes();
        const Vector out = u00(dims).matrix() * in;
        const Vector target = target_state(phi, 0, 0, dims);
        CHECK((out - target).norm() < 1e-12);
        CHECK(expectation(PureState(out), level_projector(Level::xi, dims)).real() < 1e-20);
    }

    SUBCASE("printed final pulse leaves a xi residual")
    {
        const Vector out = u00(dims, true).matrix() * ket(dims, Level::minus, 0, 0);
        const double xi_pop = expectation(PureState(out), level_projector(Level::xi, dims)).real();
        CHECK(xi_pop > 0.05);
    }
}

TEST_CASE("ideal V operators")
{
    const HilbertDims dims(5, 5);
    for (auto completion : {VCompletion::cyclic, VCompletion::transposition}) {
        for (int k = 0; k < 5; ++k) {
            const auto vp = v_plus_ideal(k, dims, completion);
            const auto vm = v_minus_ideal(k, dims, completion);
            CHECK(vp.is_unitary());
            CHECK(vm.is_unitary());
            for (int z = 0; z < 5; ++z) {
                CHECK((vp.matrix() * ket(dims, Level::plus, 0, z) - ket(dims, Level::plus, k, z)).norm() < 1e-15);
                CHECK((vm.matrix() * ket(dims, Level::minus, z, 0) - ket(dims, Level::minus, z, k)).norm() < 1e-15);
            }
            // Inert on the other branch.
            const Matrix pm = level_projector(Level::minus, dims).matrix();
            const Matrix pp = level_projector(Level::plus, dims).matrix();
            CHECK(oracle::max_abs(vp.matrix() * pm - pm) == 0.0);
            CHECK(oracle::max_abs(vm.matrix() * pp - pp) == 0.0);
        }
    }
    CHECK(oracle::max_abs(v_plus_ideal(0, dims).matrix() - Matrix::Identity(dims.dim(), dims.dim())) == 0.0);
    CHECK_THROWS_AS(v_plus_ideal(5, dims), Error);
    CHECK_THROWS_AS(v_minus_ideal(-1, dims), Error);
}

TEST_CASE("compiled V ladders")
{
    const HilbertDims dims(7, 7);
    const Matrix dp = v_plus_domain(dims);
    const Matrix dm = v_minus_domain(dims);
    for (int k = 0; k <= 5; ++k) {
        const auto cp = v_plus_compiled(k, dims);
        const auto cm = v_minus_compiled(k, dims);
        CHECK(oracle::max_abs(cp.matrix().adjoint() * cp.matrix() - Matrix::Identity(dims.dim(), dims.dim())) <=
              1e-10);
        CHECK(oracle::max_abs((cp.matrix() - v_plus_ideal(k, dims).matrix()) * dp) <= 1e-8);
        CHECK(oracle::max_abs((cm.matrix() - v_minus_ideal(k, dims).matrix()) * dm) <= 1e-8);

        // Pulse count: k sideband steps, plus a closing carrier when k is odd.
        const auto schedule = v_plus_schedule(k, dims);
        CHECK(static_cast<int>(schedule.size()) == k + (k % 2));
        for (const auto& p : schedule)
            CHECK(p.first != Level::minus);
    }
    CHECK_THROWS_AS(v_plus_compiled(6, dims), Error);
}

TEST_CASE("U_mn produces the target superposition")
{
    SUBCASE("fock(1), m = 1, n = 2 at cutoff 5")
    {
        const auto s = settings_for(5);
        const auto phi = fock(1, 5);
        const Vector out = u_mn(1, 2, s).matrix() * prepare_initial_pure(phi, s.dims).amplitudes();
        const Vector expected = (ket(s.dims, Level::minus, 1, 1) + ket(s.dims, Level::plus, 2, 1)) / std::sqrt(2.0);
        CHECK((out - expected).norm() < 1e-12);
    }

    SUBCASE("coherent input, ideal and compiled")
    {
        for (auto mode : {VMode::ideal, VMode::compiled}) {
            const auto s = settings_for(8, mode);
            const auto phi = coherent(0.8, 8);
            for (int m = 0; m < 3; ++m)
                for (int n = 0; n < 3; ++n) {
                    const Vector out = u_mn(m, n, s).matrix() * prepare_initial_pure(phi, s.dims).amplitudes();
                    CHECK((out - target_state(phi, m, n, s.dims)).norm() < 1e-9);
                }
        }
    }

    SUBCASE("compiled schedule lists U00 first")
    {
        const auto s = settings_for(6, VMode::compiled);
        const auto pulses = u_mn_schedule(2, 3, s);
        const auto head = u00_schedule();
        REQUIRE(pulses.size() >= head.size());
        for (std::size_t k = 0; k < head.size(); ++k)
            CHECK(pulses[k].kind == head[k].kind);
        CHECK(oracle::max_abs(compile_schedule(pulses, s.dims).matrix() - u_mn(2, 3, s).matrix()) < 1e-12);
    }
}

TEST_CASE("exact coherence readout")
{
    SUBCASE("fock(0), (0,0) gives 1")
    {
        const auto e = measure_element(fock(0, 6), 0, 0, settings_for(6));
        CHECK(std::abs(e.value - Complex(1.0)) < 1e-12);
        CHECK(e.standard_error == 0.0);
        CHECK(e.shots_used == 0);
    }

    SUBCASE("fock(2) diagonal and off-diagonal")
    {
        const auto s = settings_for(6);
        CHECK(std::abs(measure_element(fock(2, 6), 2, 2, s).value - Complex(1.0)) < 1e-12);
        CHECK(std::abs(measure_element(fock(2, 6), 1, 1, s).value) < 1e-12);
        CHECK(std::abs(measure_element(fock(2, 6), 2, 0, s).value) < 1e-12);
    }

    SUBCASE("complex alpha pins the sign of the imaginary part")
    {
        const Complex alpha(0.5, 0.6);
        const auto phi = coherent(alpha, 10);
        const ProtocolEngine engine(settings_for(10));
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) {
                const Complex got = engine.measure_element(phi, m, n).value;
                CHECK(std::abs(got - phi.element(m, n)) < 1e-9);
                CHECK(std::abs(got - oracle::coherent_element(alpha, m, n)) < 1e-6);
            }
        // rho_10 = alpha exp(-|alpha|^2), not its conjugate.
        CHECK(engine.measure_element(phi, 1, 0).value.imag() > 0.1);
    }

    SUBCASE("mixed inputs")
    {
        const HilbertDims dims(5, 5);
        const ProtocolEngine engine(settings_for(5));
        const Matrix rho = oracle::random_density(5, 21);
        const auto phi = VibrationalState::mixed(rho);
        for (int m = 0; m < 5; ++m)
            for (int n = 0; n < 5; ++n)
                CHECK(std::abs(engine.measure_element(phi, m, n).value - rho(m, n)) < 1e-9);
    }
}

TEST_CASE("completion choice does not change observables")
{
    auto a = settings_for(6);
    auto b = settings_for(6);
    b.completion = VCompletion::transposition;
    const auto phi = VibrationalState::mixed(oracle::random_density(6, 4));
    const ProtocolEngine ea(a);
    const ProtocolEngine eb(b);
    for (int m = 0; m < 6; ++m)
        for (int n = 0; n < 6; ++n)
            CHECK(std::abs(ea.measure_element(phi, m, n).value - eb.measure_element(phi, m, n).value) < 1e-12);
}

TEST_CASE("independent runs are Hermitian conjugates")
{
    const ProtocolEngine engine(settings_for(6, VMode::compiled));
    std::vector<Complex> amps{Complex(0.3, 0.1), Complex(-0.2, 0.5), Complex(0.4, -0.3), Complex(0.1, 0.2), 0.0, 0.0};
    const auto phi = raw(amps, 1.0);
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            CHECK(std::abs(engine.measure_element(phi, m, n).value -
                           std::conj(engine.measure_element(phi, n, m).value)) < 1e-9);
}

TEST_CASE("sampled coherence readout")
{
    auto s = settings_for(6);
    s.shots = 4000;
    s.seed = 17;
    const auto phi = coherent(0.8, 6, 1e-3);
    const Complex exact = measure_element(phi, 1, 0, settings_for(6)).value;

    SUBCASE("same seed reproduces the estimate bit for bit")
    {
        const auto a = measure_element(phi, 1, 0, s);
        const auto b = measure_element(phi, 1, 0, s);
        CHECK(a.value == b.value);
        CHECK(a.standard_error == b.standard_error);
        CHECK(a.shots_used == 4000);
        auto other = s;
        other.seed = 18;
        CHECK(measure_element(phi, 1, 0, other).value != a.value);
        // Streams differ between cells too.
        CHECK(measure_element(phi, 0, 1, s).value != std::conj(a.value));
    }

    SUBCASE("standard error follows the binomial variance")
    {
        const auto e = measure_element(phi, 1, 0, s);
        const double vx = 1.0 - exact.real() * exact.real();
        const double vy = 1.0 - exact.imag() * exact.imag();
        const double expected = std::sqrt((vx + vy) / 4000.0);
        CHECK(e.standard_error == doctest::Approx(expected).epsilon(0.05));
    }

    SUBCASE("1e5 shots land within a few standard errors")
    {
        auto big = s;
        big.shots = 100000;
        const auto e = measure_element(phi, 1, 0, big);
        CHECK(std::abs(e.value - exact) < 5.0 * e.standard_error);
        CHECK(e.standard_error < 0.005);
    }

    SUBCASE("mean over seeds is unbiased")
    {
        const ProtocolEngine exact_engine(settings_for(6));
        const DensityOperator initial = prepare_initial(phi, exact_engine.settings().dims);
        const auto rho_mn = apply(exact_engine.u_mn(2, 0), initial);
        const Complex target = coherence_expectation(rho_mn, exact_engine.settings().dims);
        Complex sum = 0.0;
        double se = 0.0;
        for (std::uint64_t seed = 0; seed < 64; ++seed) {
            const auto e = coherence_sampled(rho_mn, exact_engine.settings().dims, 2000, seed, 2, 0);
            sum += e.value;
            se += e.standard_error;
        }
        const Complex mean = sum / 64.0;
        CHECK(std::abs(mean - target) < 5.0 * (se / 64.0) / 8.0);
    }

    CHECK_THROWS_AS(coherence_sampled(prepare_initial(phi, s.dims), s.dims, 0, 1, 0, 0), Error);
}

TEST_CASE("settings validation")
{
    ProtocolSettings s;
    s.dims = HilbertDims(6, 5);
    CHECK_THROWS_AS(s.validate(), Error);
    s.dims = HilbertDims(5, 5);
    s.shots = 0;
    CHECK_THROWS_AS(s.validate(), Error);
    s.shots = 10;
    CHECK_NOTHROW(s.validate());

    const ProtocolEngine engine(settings_for(5));
    CHECK_THROWS_AS(engine.measure_element(fock(0, 5), 5, 0), Error);
    CHECK_THROWS_AS(engine.measure_element(fock(0, 5), 0, -1), Error);
}
