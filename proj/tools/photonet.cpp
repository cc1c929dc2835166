// photonet: check or simulate a photonic network netlist.
//
//   photonet check <netlist>
//   photonet simulate <netlist> [--format csv|json] [--amplitudes] [--impulse]
//                               [--threads N] [--output PATH]
//
// Exit codes: 0 ok, 1 I/O or usage, 2 parse, 3 validation, 4 numeric.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "photonet/simulation.hpp"

namespace {

enum ExitCode { ok = 0, io_error = 1, parse_error = 2, validation_error = 3, numeric_error = 4 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

photonet::CircuitDescription load(const std::string& path) { return photonet::parse_netlist(read_file(path)); }

int cmd_check(const std::string& path) {
    const auto circuit = load(path);
    const auto v = photonet::validate(circuit);
    std::cout << "m=" << v.port_map.total_ports() << ", " << circuit.components.size() << " components, "
              << v.connections.size() << " connections\n";
    for (const auto& w : v.warnings) std::cout << "warning: " << w << '\n';
    return ok;
}

int cmd_simulate(const std::string& path, const std::string& format, bool amplitudes, bool impulse, unsigned threads,
                 const std::string& output) {
    auto circuit = load(path);
    if (circuit.sources.empty()) throw photonet::ValidationError("netlist has no source");
    if (circuit.detectors.empty()) throw photonet::ValidationError("netlist has no detector");
    if (!circuit.sweep) throw photonet::ValidationError("netlist has no sweep directive");
    if (impulse && !std::holds_alternative<photonet::FrequencySweep>(*circuit.sweep))
        throw photonet::ValidationError("--impulse requires a frequency sweep");

    const photonet::Simulator sim(std::move(circuit));
    for (const auto& w : sim.validated().warnings) std::cerr << "warning: " << w << '\n';
    const auto result = sim.run(threads);
    if (const auto n = result.singular_count(); n > 0)
        std::cerr << "warning: " << n << " of " << result.points.size()
                  << " grid points are singular (exact lossless resonance); intensities reported as NaN\n";
    if (impulse && result.singular_count() > 0)
        throw photonet::GridError("impulse response is undefined with singular grid points");

    const photonet::OutputOptions opt{amplitudes, impulse};
    std::ostringstream buf;
    if (format == "json") buf << photonet::to_json(result, opt).dump(2) << '\n';
    else photonet::write_csv(buf, result, opt);

    if (output.empty() || output == "-") {
        std::cout << buf.str();
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw IoError("cannot write '" + output + "'");
        out << buf.str();
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scattering-matrix simulator for interferometric optical networks"};
    app.require_subcommand(1);

    std::string path;
    auto* check = app.add_subcommand("check", "Parse and validate a netlist");
    check->add_option("netlist", path, "Netlist file")->required();

    std::string format = "csv", output;
    bool amplitudes = false, impulse = false;
    unsigned threads = 1;
    auto* simulate = app.add_subcommand("simulate", "Run the netlist's sweep and write spectra");
    simulate->add_option("netlist", path, "Netlist file")->required();
    simulate->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    simulate->add_flag("--amplitudes", amplitudes, "Add complex detector field columns");
    simulate->add_flag("--impulse", impulse, "Add |h(tau)| per detector (frequency sweeps only)");
    simulate->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    simulate->add_option("--output", output, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : io_error;
    }

    try {
        if (*check) return cmd_check(path);
        return cmd_simulate(path, format, amplitudes, impulse, threads, output);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return io_error;
    } catch (const photonet::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return parse_error;
    } catch (const photonet::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return validation_error;
    } catch (const photonet::TopologyError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return validation_error;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return numeric_error;
    }
}
