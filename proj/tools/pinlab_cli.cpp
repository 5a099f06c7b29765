#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pinlab/claims.hpp"
#include "pinlab/experiment.hpp"
#include "pinlab/stats.hpp"

namespace {

void list_claims(std::ostream& out) {
    for (const auto& c : pinlab::claim_registry())
        out << c.id << "  [" << c.criterion << "]  " << c.description << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quenched pinning models on correlated binary environments"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    unsigned workers = pinlab::default_workers();
    std::string claim_id;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "Root seed (overrides the config)");
        sub->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", out, "Output directory (overrides the config)");
    };

    auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
    run->add_option("--config", config_path, "Config file")->required();
    add_common(run);

    auto* reproduce = app.add_subcommand("reproduce", "Run the preset for a registered claim");
    reproduce->add_option("claim-id", claim_id, "Claim identifier")->required();
    add_common(reproduce);

    auto* list = app.add_subcommand("list-claims", "List registered claims");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : pinlab::exit_config;
    }

    try {
        if (list->parsed()) {
            list_claims(std::cout);
            return 0;
        }
        pinlab::ExperimentConfig config;
        if (run->parsed()) {
            std::ifstream in(config_path);
            if (!in) throw pinlab::ConfigError("cannot open config '" + config_path + "'");
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw pinlab::ConfigError(std::string("config is not valid JSON: ") + e.what());
            }
            config = pinlab::config_from_json(j);
        } else {
            if (!pinlab::find_claim(claim_id)) {
                std::cerr << "unknown claim '" << claim_id << "'; available claims:\n";
                list_claims(std::cerr);
                return pinlab::exit_config;
            }
            config.kind = pinlab::ExperimentKind::reproduce;
            config.claim = claim_id;
            config.out = "reproduce-" + claim_id;
        }
        const int code = pinlab::run(config, pinlab::RunOptions{workers, seed, out});
        std::ifstream summary(std::string(out.value_or(config.out)) + "/summary.txt");
        std::cout << summary.rdbuf();
        return code;
    } catch (const pinlab::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return pinlab::exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return pinlab::exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return pinlab::exit_fail;
    }
}
