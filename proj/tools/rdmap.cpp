#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <rdmap/rdmap.hpp>

// Exit codes: 0 run complete (or all checks green), 1 acceptance failure,
// 2 input/validation error.

namespace {

std::optional<rdmap::BipartiteDims> parse_dims(const std::string& s) {
    if (s.empty()) return std::nullopt;
    unsigned long a = 0, b = 0;
    if (std::sscanf(s.c_str(), "%lu,%lu", &a, &b) != 2 || a == 0 || b == 0)
        throw rdmap::Error(rdmap::Errc::bad_argument,
                           "--dims expects two positive integers like 2,3");
    return rdmap::BipartiteDims{a, b};
}

rdmap::Destroyer build_destroyer(const std::string& spec, std::size_t dim,
                                 std::optional<rdmap::BipartiteDims> dims) {
    if (spec == "dephasing") return rdmap::dephasing_destroyer(dim);
    if (spec == "discord") {
        if (dims && dims->a * dims->b != dim)
            throw rdmap::Error(rdmap::Errc::dimension_mismatch,
                               "--dims product does not match the input dimension");
        return rdmap::discord_destroyer(dims);
    }
    if (spec.rfind("twirl:", 0) == 0) {
        const auto us =
            rdmap::unitaries_from_json(rdmap::load_json_file(spec.substr(6)));
        for (const auto& u : us)
            if (u.rows() != dim)
                throw rdmap::Error(rdmap::Errc::dimension_mismatch,
                                   "twirl group dimension does not match the input");
        return rdmap::twirl_destroyer(us);
    }
    if (spec.rfind("extreme:", 0) == 0) {
        const rdmap::DensityMatrix target = rdmap::load_state(spec.substr(8));
        if (target.dim() != dim)
            throw rdmap::Error(rdmap::Errc::dimension_mismatch,
                               "collapse target dimension does not match the input");
        return rdmap::collapse_destroyer(target);
    }
    throw rdmap::Error(rdmap::Errc::bad_argument,
                       "unknown destroyer spec '" + spec +
                           "' (want dephasing | discord | twirl:<file> | "
                           "extreme:<file>)");
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        rdmap::save_text(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for resource destroying maps: classify channels, "
                 "evaluate monotones, run the acceptance catalog"};
    app.set_version_flag("--version", rdmap::kVersion);
    app.fallthrough();
    app.require_subcommand(1);

    rdmap::RunConfig cfg;
    std::string out_path, destroyer_spec = "dephasing", dims_str;
    std::string measure_name = "relative-entropy";
    app.add_option("--tol", cfg.tol, "numerical tolerance for verdicts");
    app.add_option("--samples", cfg.samples, "random probes per sampled check");
    app.add_option("--remixes", cfg.remixes, "arm-remix attempts in selective searches");
    app.add_option("--seed", cfg.seed, "seed for every random draw");
    app.add_option("--out", out_path, "write output to this file instead of stdout");
    app.add_option("--destroyer", destroyer_spec,
                   "dephasing | discord | twirl:<file> | extreme:<file>");
    app.add_option("--dims", dims_str, "bipartite split a,b for discord checks");
    app.add_option("--measure", measure_name, "relative-entropy | trace-distance");

    std::string channel_path, state_path;
    auto* classify = app.add_subcommand(
        "classify", "run the three conditions and their arm-wise versions on a channel");
    classify->add_option("channel", channel_path, "channel JSON file")->required();

    auto* monotone = app.add_subcommand(
        "monotone", "distance from a state to its destroyed image");
    monotone->add_option("state", state_path, "state JSON file")->required();

    auto* suite = app.add_subcommand(
        "suite", "run the full acceptance catalog and print one row per check");

    std::string family = "swap";
    double grid_from = -0.01, grid_to = 0.01, grid_step = 0.002;
    rdmap::ScanConfig scan_cfg;
    auto* scan = app.add_subcommand(
        "scan", "sweep a one-parameter family and flag value jumps at degeneracies");
    scan->add_option("--family", family, "swap | control");
    scan->add_option("--from", grid_from, "first parameter value");
    scan->add_option("--to", grid_to, "last parameter value");
    scan->add_option("--step", grid_step, "grid spacing");
    scan->add_option("--jump-threshold", scan_cfg.jump_threshold,
                     "flag jumps larger than this (bits)");
    scan->add_option("--move-threshold", scan_cfg.move_threshold,
                     "only flag when the state moved less than this");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::optional<rdmap::BipartiteDims> dims = parse_dims(dims_str);
        if (cfg.tol <= 0 || cfg.samples <= 0 || cfg.remixes <= 0)
            throw rdmap::Error(rdmap::Errc::bad_argument,
                               "--tol, --samples and --remixes must be positive");

        if (classify->parsed()) {
            rdmap::KrausChannel ch = rdmap::load_channel(channel_path);
            // a channel sized for subsystem A alone is lifted to act
            // locally on the bipartite space
            if (dims && ch.dim_in() == dims->a && dims->a * dims->b != ch.dim_in())
                ch = rdmap::embed_local(ch, rdmap::Subsystem::A, dims->b);
            const rdmap::Destroyer dest =
                build_destroyer(destroyer_spec, ch.dim_in(), dims);
            const rdmap::ClassificationReport rep =
                rdmap::classify(ch, dest, cfg, dims);
            emit(rdmap::classification_to_json(rep).dump(2) + "\n", out_path);
            return 0;
        }

        if (monotone->parsed()) {
            rdmap::DensityMatrix rho = rdmap::load_state(state_path);
            if (dims) rho = rdmap::with_dims(rho, *dims);
            const rdmap::Destroyer dest =
                build_destroyer(destroyer_spec, rho.dim(),
                                dims ? dims : rho.dims());
            const rdmap::DistanceMeasure measure =
                rdmap::measure_by_name(measure_name);
            const double value = rdmap::dtilde(rho, dest, measure);
            std::ostringstream os;
            os << std::fixed << std::setprecision(12) << value << "\n";
            emit(os.str(), out_path);
            return 0;
        }

        if (suite->parsed()) {
            const rdmap::SuiteReport rep = rdmap::run_full_suite(cfg);
            rdmap::print_suite(rep, std::cout);
            if (!out_path.empty()) emit(rdmap::suite_to_json(rep).dump(2) + "\n", out_path);
            return rep.all_pass ? 0 : 1;
        }

        if (scan->parsed()) {
            std::function<rdmap::DensityMatrix(double)> fam;
            if (family == "swap")
                fam = [](double e) { return rdmap::eigenbasis_swap_family(e); };
            else if (family == "control")
                fam = [](double e) { return rdmap::nondegenerate_control_family(e); };
            else
                throw rdmap::Error(rdmap::Errc::bad_argument,
                                   "unknown family '" + family + "' (want swap | control)");
            if (grid_step <= 0 || grid_to < grid_from)
                throw rdmap::Error(rdmap::Errc::bad_argument,
                                   "need --step > 0 and --to >= --from");
            const auto rows = rdmap::degeneracy_scan(
                fam, rdmap::uniform_grid(grid_from, grid_to, grid_step), scan_cfg);
            emit(rdmap::scan_to_csv(rows), out_path);
            return 0;
        }
    } catch (const rdmap::Error& e) {
        std::cerr << "error [" << rdmap::errc_name(e.code()) << "]: " << e.what()
                  << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
