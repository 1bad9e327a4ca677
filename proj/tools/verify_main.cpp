// Verification harness: runs the identity and inequality suites against the
// library and writes machine-readable reports.
//
// Exit codes: 0 all suites passed, 1 at least one suite failed,
// 2 usage or configuration error.

#include <cstdint>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <polyapprox/verify/suites.hpp>

namespace pv = polyapprox::verify;

namespace {

const char* domain_name(polyapprox::Domain d) {
    return d == polyapprox::Domain::sphere ? "sphere" : "ball";
}

int cmd_list() {
    for (const auto& d : pv::suite_registry()) {
        std::cout << d.id;
        for (std::size_t k = d.id.size(); k < 22; ++k) std::cout << ' ';
        std::cout << d.what << "\n";
    }
    return 0;
}

int cmd_corpus() {
    for (const auto& e : pv::corpus_all()) {
        std::cout << e.name;
        for (std::size_t k = e.name.size(); k < 12; ++k) std::cout << ' ';
        std::cout << domain_name(e.domain) << " dim=" << e.dim;
        if (e.poly_degree >= 0) std::cout << " degree=" << e.poly_degree;
        if (e.alpha > 0.0) std::cout << " alpha=" << e.alpha;
        std::cout << "  " << e.cls << "\n";
    }
    return 0;
}

int cmd_run(const std::string& suite, const std::string& config_path, const std::string& out_dir,
            const std::string& format, std::uint64_t seed, int jobs) {
    pv::Config cfg;
    try {
        cfg = pv::Config::parse_file(config_path);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }

    std::vector<std::string> ids;
    if (suite == "all") {
        for (const auto& d : pv::suite_registry()) ids.push_back(d.id);
    } else {
        if (!pv::find_suite(suite)) {
            std::cerr << "error: unknown suite: " << suite << "\n";
            std::cerr << "use 'verify list' to see the available suites\n";
            return 2;
        }
        ids.push_back(suite);
    }

    std::vector<pv::SuiteReport> reports(ids.size());
    try {
        if (jobs <= 1) {
            for (std::size_t k = 0; k < ids.size(); ++k) reports[k] = pv::run_suite(ids[k], cfg, seed);
        } else {
            for (std::size_t base = 0; base < ids.size(); base += static_cast<std::size_t>(jobs)) {
                const std::size_t stop =
                    std::min(ids.size(), base + static_cast<std::size_t>(jobs));
                std::vector<std::future<pv::SuiteReport>> futs;
                for (std::size_t k = base; k < stop; ++k)
                    futs.push_back(std::async(std::launch::async, [&cfg, &ids, seed, k] {
                        return pv::run_suite(ids[k], cfg, seed);
                    }));
                for (std::size_t k = base; k < stop; ++k) reports[k] = futs[k - base].get();
            }
        }
        pv::emit_report(reports, out_dir, format);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }

    bool all = true;
    for (const auto& r : reports) {
        std::size_t np = 0;
        for (const auto& c : r.cases) np += c.pass ? 1 : 0;
        std::cout << (r.pass ? "pass  " : "FAIL  ") << r.suite << " (" << np << "/"
                  << r.cases.size() << " cases)\n";
        all = all && r.pass;
    }
    std::cout << (all ? "all suites passed" : "suite failures present") << "; reports in "
              << out_dir << "\n";
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification harness for the sphere and ball approximation library"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one suite or all of them");
    std::string suite, config_path, out_dir;
    std::string format = "both";
    std::uint64_t seed = 42;
    int jobs = 1;
    run->add_option("--suite", suite, "suite id, or 'all'")->required();
    run->add_option("--config", config_path, "INI configuration file")->required();
    run->add_option("--out", out_dir, "output directory for reports")->required();
    run->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    run->add_option("--seed", seed, "base RNG seed (default 42)");
    run->add_option("--jobs", jobs, "suites run in parallel")->check(CLI::PositiveNumber);

    auto* list = app.add_subcommand("list", "list the available suites");
    auto* corp = app.add_subcommand("corpus", "list the fixed test functions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list->parsed()) return cmd_list();
    if (corp->parsed()) return cmd_corpus();
    return cmd_run(suite, config_path, out_dir, format, seed, jobs);
}
