// logosc: command-line front end for the log-periodic oscillator library.

#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "logosc/commands.hpp"

namespace {

struct FlagValues {
    std::string config_file;
};

void print_matrix(const logosc::json& summary) {
    for (const auto& g : summary["gates"]) {
        std::cerr << (g["passed"].get<bool>() ? "PASS " : "FAIL ") << g["name"].get<std::string>() << " ["
                  << g["family"].get<std::string>() << "] measured=" << g["measured"].dump()
                  << " threshold=" << g["threshold"].dump() << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-dependent harmonic oscillators with log-periodic solutions"};
    app.require_subcommand(1, 1);

    static const std::pair<const char*, const char*> kCommands[] = {
        {"rho", "Pinney amplitude, closed form and numeric, with residuals"},
        {"wavefunction", "psi_n(q, t) slices with a normalization sidecar"},
        {"observables", "fluctuations and q-p correlations for Fock and coherent states"},
        {"trajectory", "classical (q, p) on the time grid"},
        {"phase-diagram", "classical (q, p) orbit, log-spaced in t"},
        {"verify", "run every invariant gate; exit 0 iff all pass"},
    };
    static const std::pair<const char*, const char*> kValueFlags[] = {
        {"family", "caseA | caseB | caseC | constant | all (default all)"},
        {"m0", "mass scale (default 1)"},
        {"k0", "stiffness scale (default 100, omega0 = 10)"},
        {"t0", "reference time (default 1)"},
        {"hbar", "Planck constant (default 1)"},
        {"n", "state orders, e.g. 0,1,2 or 0-6 (default 0,1,2)"},
        {"t-start", "first grid time (default t0)"},
        {"t-end", "last grid time (default 100 t0)"},
        {"t-count", "grid points (default 200)"},
        {"spacing", "log | linear (default log)"},
        {"q-max", "wavefunction half-window; 0 picks one from the state width"},
        {"q-count", "wavefunction grid points (default 201)"},
        {"q0", "initial displacement (default 1)"},
        {"v0", "initial velocity (default 0)"},
        {"samples", "phase-diagram points (default 2000)"},
        {"out", "output directory (default out)"},
    };

    FlagValues flags;
    std::map<std::string, std::string> storage;
    for (const auto& [name, help] : kCommands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", flags.config_file, "flat key = value file; flags given here override it");
        for (const auto& [flag, flag_help] : kValueFlags) {
            sub->add_option(std::string("--") + flag, storage[flag], flag_help);
        }
        for (const auto& [tol, ptr] : logosc::RunConfig::tolerance_fields()) {
            const std::string key = "tol-" + std::string(tol);
            sub->add_option("--" + key, storage[key], "tolerance override");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        logosc::json j;
        j["error"]["code"] = "InvalidConfig";
        j["error"]["exit_code"] = 2;
        j["error"]["message"] = e.what();
        std::cout << j.dump(2) << '\n';
        return 2;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string command = chosen->get_name();
    try {
        logosc::RunConfig cfg;
        if (!flags.config_file.empty()) logosc::load_config_file(cfg, flags.config_file);
        for (const auto& [key, value] : storage) {
            if (chosen->count("--" + key) > 0) logosc::apply_setting(cfg, key, value);
        }

        static const std::map<std::string, std::function<logosc::CommandOutcome(const logosc::RunConfig&)>> dispatch = {
            {"rho", logosc::cmd_rho},
            {"wavefunction", logosc::cmd_wavefunction},
            {"observables", logosc::cmd_observables},
            {"trajectory", logosc::cmd_trajectory},
            {"phase-diagram", logosc::cmd_phase_diagram},
            {"verify", logosc::cmd_verify},
        };
        const logosc::CommandOutcome outcome = dispatch.at(command)(cfg);
        if (command == "verify") print_matrix(outcome.summary);
        std::cout << outcome.summary.dump(2) << '\n';
        return outcome.exit_code;
    } catch (const logosc::Error& e) {
        std::cout << logosc::error_json(e).dump(2) << '\n';
        return logosc::exit_code_for(e.code());
    } catch (const std::exception& e) {
        logosc::json j;
        j["error"]["code"] = "Internal";
        j["error"]["exit_code"] = 70;
        j["error"]["message"] = e.what();
        std::cout << j.dump(2) << '\n';
        return 70;
    }
}
