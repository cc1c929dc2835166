#include <gtest/gtest.h>

#include <fstream>
#include <numbers>
#include <sstream>

#include "photonet/simulation.hpp"

using namespace photonet;

namespace {
std::string fixture(const std::string& name) {
    std::ifstream in(std::string(PHOTONET_FIXTURES) + "/" + name);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Simulator load(const std::string& name) { return Simulator(parse_netlist(fixture(name))); }

std::string csv(const SweepResult& r, OutputOptions opt = {}) {
    std::ostringstream os;
    write_csv(os, r, opt);
    return os.str();
}
}  // namespace

TEST(Linspace, IncludesBothEndpoints) {
    const auto v = linspace(1.0, 2.0, 5);
    ASSERT_EQ(v.size(), 5u);
    EXPECT_EQ(v.front(), 1.0);
    EXPECT_EQ(v.back(), 2.0);
    EXPECT_DOUBLE_EQ(v[2], 1.5);
    EXPECT_EQ(linspace(3.0, 4.0, 1), std::vector<double>{3.0});
}

TEST(Simulator, ConnectionMatrixBuiltOnce) {
    const auto sim = load("mzi.net");
    EXPECT_EQ(sim.connection_matrix_builds(), 1);
    const auto r = sim.run(3);
    EXPECT_EQ(r.points.size(), 101u);
    EXPECT_EQ(sim.connection_matrix_builds(), 1);
    EXPECT_EQ(sim.connection_matrix(), sim.connection_matrix().transpose());
}

TEST(Simulator, MziFringeMatchesTwoBeamFormula) {
    const auto sim = load("mzi.net");
    const auto r = sim.run();
    ASSERT_EQ(r.detector_names, (std::vector<std::string>{"c2.3", "c2.4"}));
    const double delta_len = 100e-6, n = 1.5;
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const double w = r.grid.omegas[i];
        const double c = std::cos(w * n * delta_len / (2 * speed_of_light));
        const auto& p = r.points[i];
        ASSERT_FALSE(p.singular);
        EXPECT_NEAR(p.intensities[1], c * c, 1e-9) << i;
        EXPECT_NEAR(p.intensities[0], 1 - c * c, 1e-9) << i;
        EXPECT_NEAR(p.intensities[0] + p.intensities[1], 1.0, 1e-9);
        lo = std::min(lo, p.intensities[1]);
        hi = std::max(hi, p.intensities[1]);
    }
    EXPECT_LT(lo / hi, 1e-8);
    EXPECT_EQ(r.m, 12);
    EXPECT_EQ(r.component_count, 4u);
    EXPECT_EQ(r.connection_count, 4u);
    EXPECT_GE(r.condition_max, 1.0);
}

TEST(Simulator, SingleWaveguideIsTransparent) {
    const auto r = load("single_waveguide.net").run();
    ASSERT_EQ(r.points.size(), 1u);
    EXPECT_NEAR(r.points[0].intensities[0], 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(r.grid.values[0], 1.55e-6);
}

TEST(Simulator, RingThroughMatchesAllPassFormula) {
    const auto r = load("ring.net").run();
    const double t = std::sqrt(1 - 0.19), a = 0.95, len = 150e-6;
    std::size_t dip = 0;
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const complex e = a * std::exp(complex(0, r.grid.omegas[i] * len / speed_of_light));
        const double expected = std::norm((t - e) / (1.0 - t * e));
        EXPECT_NEAR(r.points[i].intensities[0], expected, 1e-9) << i;
        if (r.points[i].intensities[0] < r.points[dip].intensities[0]) dip = i;
    }
    EXPECT_EQ(dip, 10u);
    const double tmin = std::pow((a - t) / (1 - a * t), 2);
    EXPECT_NEAR(r.points[dip].intensities[0], tmin, 1e-6);
    EXPECT_EQ(r.singular_count(), 0u);
}

TEST(Simulator, ClosedLosslessRingFlagsResonance) {
    const auto r = load("ring_closed.net").run();
    ASSERT_EQ(r.points.size(), 21u);
    EXPECT_EQ(r.singular_count(), 1u);
    EXPECT_TRUE(r.points[10].singular);
    EXPECT_TRUE(std::isnan(r.points[10].intensities[0]));
    EXPECT_GT(r.points[10].condition, singularity_threshold);
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        if (i == 10) continue;
        EXPECT_NEAR(r.points[i].intensities[0], 1.0, 1e-9) << i;  // decoupled loop: light passes straight through
    }
    const auto text = csv(r);
    EXPECT_NE(text.find(",nan\n"), std::string::npos);
}

TEST(Simulator, FabryPerotAiryTransmission) {
    const auto r = load("fabry_perot.net").run();
    const double R = 0.81, gap = 1e-3;
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const double phi = r.grid.omegas[i] * gap / speed_of_light;
        const double expected = (1 - R) * (1 - R) / std::norm(1.0 - R * std::exp(complex(0, 2 * phi)));
        EXPECT_NEAR(r.points[i].intensities[0], expected, 1e-9) << i;
        EXPECT_NEAR(r.points[i].intensities[0] + r.points[i].intensities[1], 1.0, 1e-9) << i;
    }
}

TEST(Simulator, PolarizationChainIsPassive) {
    const auto r = load("polarization.net").run();
    for (const auto& p : r.points) {
        ASSERT_FALSE(p.singular);
        EXPECT_LE(p.intensities[0] + p.intensities[1], 1.0 + 1e-9);
        EXPECT_GT(p.intensities[0], 0.0);
    }
}

TEST(Simulator, LaunchSumsSources) {
    const Simulator sim(parse_netlist(
        "component c coupler\nsource c.1 pol=1,0,0,0\nsource c.2 pol=0,0,1,0\ndetect c.3\ndetect c.4\nsweep single 1550nm\n"));
    EXPECT_EQ(sim.launch()[0], complex(1.0));
    EXPECT_EQ(sim.launch()[3], complex(1.0));
    const auto r = sim.run();
    EXPECT_NEAR(r.points[0].intensities[0], 1.0, 1e-12);
    EXPECT_NEAR(r.points[0].intensities[1], 1.0, 1e-12);
}

TEST(Simulator, ThreadCountDoesNotChangeOutput) {
    for (const char* name : {"mzi.net", "polarization.net", "ring_closed.net", "fabry_perot.net"}) {
        const auto sim = load(name);
        const auto one = csv(sim.run(1), {.amplitudes = true});
        for (unsigned t : {2u, 4u, 8u, 1000u}) EXPECT_EQ(csv(sim.run(t), {.amplitudes = true}), one) << name << " threads=" << t;
    }
}

TEST(Simulator, RequiresSweep) {
    const Simulator sim(parse_netlist("component w waveguide\n"));
    EXPECT_THROW(sim.run(), ValidationError);
}

TEST(Output, CsvLayout) {
    const auto r = load("mzi.net").run();
    const auto text = csv(r, {.amplitudes = true});
    std::istringstream in(text);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    EXPECT_EQ(header,
              "omega_rad_s,I_c2.3,I_c2.4,c2.3_ex_re,c2.3_ex_im,c2.3_ey_re,c2.3_ey_im,c2.4_ex_re,c2.4_ex_im,c2.4_ey_re,c2.4_ey_im");
    EXPECT_EQ(std::count(first.begin(), first.end(), ','), 10);
    EXPECT_EQ(first.substr(0, first.find(',')), "1218094680193058.2");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 102);
    const auto wl = csv(load("ring.net").run());
    EXPECT_EQ(wl.substr(0, wl.find('\n')), "wavelength_m,I_c1.3");
}

TEST(Output, ImpulseSection) {
    const auto r = load("mzi.net").run();
    const auto text = csv(r, {.impulse = true});
    const auto pos = text.find("\n\ntau_s,h_c2.3,h_c2.4\n");
    ASSERT_NE(pos, std::string::npos);
    const auto tail = text.substr(pos + 2);
    EXPECT_EQ(std::count(tail.begin(), tail.end(), '\n'), 102);

    const auto t = detector_impulse(r);
    ASSERT_EQ(t.tau.size(), 101u);
    // Energy is the same on both sides of the transform.
    const double dw = r.grid.omegas[1] - r.grid.omegas[0];
    const double dtau = t.tau[1] - t.tau[0];
    for (std::size_t d = 0; d < 2; ++d) {
        double e_omega = 0.0, e_tau = 0.0;
        for (const auto& p : r.points) e_omega += p.intensities[d] * dw;
        for (double h : t.magnitude[d]) e_tau += h * h * dtau;
        EXPECT_NEAR(e_tau / e_omega, 1.0, 1e-9);
    }
    EXPECT_THROW(detector_impulse(load("ring.net").run()), GridError);
    EXPECT_THROW(detector_impulse(load("ring_closed.net").run()), GridError);
}

TEST(Output, JsonSchema) {
    const auto r = load("ring_closed.net").run();
    const auto j = to_json(r, {.amplitudes = true});
    EXPECT_EQ(j.at("schema_version").get<int>(), output_schema_version);
    EXPECT_EQ(j.at("grid").at("kind"), "wavelength");
    EXPECT_EQ(j.at("grid").at("unit"), "m");
    EXPECT_EQ(j.at("grid").at("values").size(), 21u);
    ASSERT_EQ(j.at("detectors").size(), 1u);
    const auto& d = j.at("detectors")[0];
    EXPECT_EQ(d.at("port"), "c1.3");
    EXPECT_TRUE(d.at("intensity")[10].is_null());
    EXPECT_TRUE(d.at("intensity")[9].is_number());
    EXPECT_TRUE(d.at("ex")[10].is_null());
    EXPECT_EQ(d.at("ex")[9].size(), 2u);
    EXPECT_EQ(j.at("status")[10], "singular");
    EXPECT_EQ(j.at("status")[0], "ok");
    const auto& meta = j.at("metadata");
    EXPECT_EQ(meta.at("m"), 6);
    EXPECT_EQ(meta.at("components"), 2);
    EXPECT_EQ(meta.at("connections"), 2);
    EXPECT_EQ(meta.at("singular_points"), 1);
    EXPECT_GT(meta.at("condition_max").get<double>(), singularity_threshold);
    EXPECT_TRUE(meta.at("wall_time_s").is_number());
    EXPECT_FALSE(j.contains("impulse"));

    const auto jm = to_json(load("mzi.net").run(), {.impulse = true});
    EXPECT_EQ(jm.at("impulse").at("tau_s").size(), 101u);
    EXPECT_EQ(jm.at("impulse").at("magnitude").at("c2.4").size(), 101u);
    EXPECT_FALSE(jm.at("detectors")[0].contains("ex"));
    EXPECT_EQ(nlohmann::json::parse(jm.dump()), jm);
}
