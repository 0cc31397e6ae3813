#include <catch2/catch.hpp>

#include <random>

#include "md2d/channel.hpp"

using namespace md2d;

namespace {

// Hand-evaluated reference for the straight-line link budget:
//   lambda = c / 60 GHz, k0 = (lambda / 4 pi)^2, noise = N0 + 10 log10(W)
// computed independently of the implementation and frozen here.
constexpr double kG0_15 = 21.855948674075194;
constexpr double kK0Db = -68.010808229556247;
constexpr double kNoiseDbm = -100.65546248849068;
constexpr double kPrx5m = -8.2783109681262363;       // 30 dBm, both gains G0(15), d = 5 m, tau = 2
constexpr double kRate5m = 33141987536.707199;       // through SNR and Shannon rate

}  // namespace

TEST_CASE("k0 and noise floor match the frozen reference") {
    ChannelModel m = make_los_model();
    REQUIRE(10.0 * std::log10(m.k0) == Approx(kK0Db).epsilon(1e-12));
    REQUIRE(m.noise_power_dbm() == Approx(kNoiseDbm).epsilon(1e-12));
}

TEST_CASE("received_power: frozen hand evaluation at 5 m") {
    ChannelModel m = make_los_model();
    double prx = received_power(kG0_15, kG0_15, 5.0, 30.0, m);
    REQUIRE(prx == Approx(kPrx5m).epsilon(1e-12));
}

TEST_CASE("received_power: doubling distance under tau=2 costs 20 log10(2) dB") {
    ChannelModel m = make_los_model();
    double near = received_power(10.0, 10.0, 3.0, 30.0, m);
    double far = received_power(10.0, 10.0, 6.0, 30.0, m);
    REQUIRE(near - far == Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
}

TEST_CASE("received_power is linear in the gains") {
    ChannelModel m = make_los_model();
    double base = received_power(10.0, 10.0, 4.0, 30.0, m);
    REQUIRE(received_power(13.0, 10.0, 4.0, 30.0, m) == Approx(base + 3.0).epsilon(1e-12));
    REQUIRE(received_power(10.0, 10.0, 4.0, 33.0, m) == Approx(base + 3.0).epsilon(1e-12));
}

TEST_CASE("received_power rejects zero distance") {
    ChannelModel m = make_los_model();
    REQUIRE_THROWS_AS(received_power(0, 0, 0.0, 30.0, m), std::invalid_argument);
}

TEST_CASE("snr: decades and unit point") {
    ChannelModel m = make_los_model();
    REQUIRE(snr(m.noise_power_dbm(), m) == Approx(1.0).epsilon(1e-12));
    REQUIRE(snr(m.noise_power_dbm() + 10.0, m) == Approx(10.0).epsilon(1e-12));
    REQUIRE(snr(m.noise_power_dbm() - 10.0, m) == Approx(0.1).epsilon(1e-12));
}

TEST_CASE("rate: Shannon with transceiver efficiency") {
    ChannelModel m = make_los_model();
    REQUIRE(rate(0.0, m) == 0.0);
    REQUIRE(rate(1.0, m) == Approx(1.08e9).epsilon(1e-12));
    REQUIRE(rate(3.0, m) == Approx(2.16e9).epsilon(1e-12));
    REQUIRE_THROWS_AS(rate(-0.5, m), std::invalid_argument);
}

namespace {

Topology two_node_topology(Point2D user) {
    Topology t;
    t.area_side_m = 20.0;
    t.ap_position = {10, 10};
    t.user_positions = {user};
    return t;
}

}  // namespace

TEST_CASE("link pipeline matches the frozen end-to-end evaluation") {
    Topology t = two_node_topology({15, 10});  // 5 m east of the AP
    Codebook cb = build_codebook(std::vector<double>{15.0, 30.0, 45.0, 60.0});
    ChannelModel m = make_los_model();

    const Beam& aligned = cb.finest_level().beams[0];  // boresight 0 deg
    LinkBudget lb = link_budget(t, kApNode, aligned, 1, cb, m, 30.0);
    REQUIRE(lb.rx_power_dbm == Approx(kPrx5m).epsilon(1e-9));
    REQUIRE(lb.rate_bps == Approx(kRate5m).epsilon(1e-9));
}

TEST_CASE("on-boresight receiver: widening the beam never helps") {
    Topology t = two_node_topology({16, 10});
    Codebook cb = build_codebook(std::vector<double>{15.0, 30.0, 45.0, 60.0});
    ChannelModel m = make_los_model();

    double previous = -1.0;
    // levels run widest -> narrowest; each narrower aligned beam must win
    for (const auto& level : cb.levels) {
        double r = link_rate(t, kApNode, level.beams[0], 1, cb, m, 30.0);
        REQUIRE(r > previous);
        previous = r;
    }
}

TEST_CASE("link_rate is strictly decreasing in distance (LOS)") {
    Codebook cb = build_codebook(std::vector<double>{15.0, 30.0, 45.0, 60.0});
    ChannelModel m = make_los_model();
    double previous = std::numeric_limits<double>::infinity();
    for (double d = 1.0; d <= 9.0; d += 1.0) {
        Topology t = two_node_topology({10 + d, 10});
        double r = link_rate(t, kApNode, cb.finest_level().beams[0], 1, cb, m, 30.0);
        REQUIRE(r < previous);
        REQUIRE(r > 0.0);
        REQUIRE(std::isfinite(r));
        previous = r;
    }
}

TEST_CASE("link_budget rejects coincident nodes") {
    Topology t;
    t.area_side_m = 20.0;
    t.ap_position = {10, 10};
    t.user_positions = {{4, 4}, {4, 4}};
    Codebook cb = build_codebook(std::vector<double>{15.0});
    ChannelModel m = make_los_model();
    REQUIRE_THROWS_AS(link_budget(t, 1, cb.finest_level().beams[0], 2, cb, m, 30.0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(link_budget(t, 1, cb.finest_level().beams[0], 1, cb, m, 30.0),
                      std::invalid_argument);
}

TEST_CASE("NLOS with sigma 0 differs from LOS only through the exponent") {
    Topology t = two_node_topology({14, 13});
    Codebook cb = build_codebook(std::vector<double>{15.0, 30.0, 45.0, 60.0});
    ChannelModel los = make_los_model();
    ChannelModel nlos = make_nlos_model(99, 0.0);

    ChannelModel nlos_as_los = nlos;
    nlos_as_los.path_loss_exponent = los.path_loss_exponent;

    const Beam& beam = cb.finest_level().beams[1];
    REQUIRE(link_rate(t, kApNode, beam, 1, cb, nlos_as_los, 30.0) ==
            Approx(link_rate(t, kApNode, beam, 1, cb, los, 30.0)).epsilon(1e-12));
    REQUIRE(link_rate(t, kApNode, beam, 1, cb, nlos, 30.0) <
            link_rate(t, kApNode, beam, 1, cb, los, 30.0));
}

TEST_CASE("shadowing draws are frozen per (seed, ordered link)") {
    ChannelModel nlos = make_nlos_model(1234, 5.8);
    double d1 = link_shadowing_db(nlos, 1, 2);
    double d2 = link_shadowing_db(nlos, 1, 2);
    REQUIRE(d1 == d2);
    REQUIRE(link_shadowing_db(nlos, 2, 1) != d1);  // ordered link

    ChannelModel other = make_nlos_model(1235, 5.8);
    REQUIRE(link_shadowing_db(other, 1, 2) != d1);

    ChannelModel los = make_los_model();
    REQUIRE(link_shadowing_db(los, 1, 2) == 0.0);

    // dB perturbations scale with sigma
    ChannelModel doubled = make_nlos_model(1234, 11.6);
    REQUIRE(link_shadowing_db(doubled, 1, 2) == Approx(2.0 * d1).epsilon(1e-12));
}

TEST_CASE("rates stay finite and nonnegative across random links") {
    std::mt19937_64 rng(21);
    Codebook cb = build_codebook(std::vector<double>{15.0, 30.0, 45.0, 60.0});
    ChannelModel nlos = make_nlos_model(5, 5.8);
    for (int i = 0; i < 200; ++i) {
        Topology t = generate_topology(2, 20.0, rng());
        if (distance(t.user_positions[0], t.user_positions[1]) == 0.0) continue;
        const Beam& beam = cb.levels[i % cb.levels.size()].beams[0];
        double r = link_rate(t, 1, beam, 2, cb, nlos, 30.0);
        REQUIRE(std::isfinite(r));
        REQUIRE(r >= 0.0);
    }
}
