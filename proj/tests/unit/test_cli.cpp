#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "lab/config.hpp"
#include "lab/fixtures.hpp"
#include "lab/run.hpp"
#include "multavg/errors.hpp"
#include "multavg/version.hpp"

using namespace multavg;
using namespace multavg::lab;

namespace {

std::string strip_wall_time(const std::string& csv) {
    std::istringstream in(csv);
    std::string out, line;
    while (std::getline(in, line))
        if (line.rfind("# wall_time_s", 0) != 0) out += line + "\n";
    return out;
}

std::string run_to_string(const ExperimentConfig& c, int* code = nullptr) {
    std::ostringstream out, err;
    const int rc = run(c, out, err);
    if (code) *code = rc;
    return out.str();
}

// First data row (after the header and column lines), split on commas.
std::vector<std::vector<std::string>> data_rows(const std::string& csv) {
    std::istringstream in(csv);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream cs(line);
        for (std::string cell; std::getline(cs, cell, ',');) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("multavg_cli_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("config: defaults round-trip") {
    const ExperimentConfig c;
    CHECK(parse_config(serialize_config(c)) == c);
    CHECK(config_hash(c).size() == 16);
}

TEST_CASE("config: every recipe parses and round-trips") {
    for (const auto& r : recipes()) {
        CAPTURE(r.id);
        const auto c = parse_config(r.config);
        const auto text = serialize_config(c);
        CHECK(parse_config(text) == c);
        CHECK(serialize_config(parse_config(text)) == text);
        CHECK(config_hash(parse_config(text)) == config_hash(c));
    }
}

TEST_CASE("config: field values") {
    const auto c = parse_config("kind = multiavg\nseed = 9\nthreads = 2\n[functions]\nf = liouville\nf = one\n"
                                "[forms]\nL = [1,0]\nL = [1,1] + 2\n[checkpoints]\nvalues = 10, 10^3\n"
                                "[lemma]\nc = 0.5, -0.25\n[ergodic]\nF = 3 : 1, 2\n");
    CHECK(c.kind == "multiavg");
    CHECK(c.seed == 9);
    CHECK(c.threads == 2);
    REQUIRE(c.functions.size() == 2);
    CHECK(c.functions[1] == "one");
    REQUIRE(c.forms.size() == 2);
    CHECK(c.forms[1].offset() == 2);
    CHECK(c.checkpoints == std::vector<std::int64_t>{10, 1000});
    CHECK(c.lemma_c == Complex(0.5, -0.25));
    REQUIRE(c.ergodic_F.size() == 1);
    CHECK(c.ergodic_F[0].first == 3);
    CHECK(c.ergodic_F[0].second == Complex(1, 2));
}

TEST_CASE("config: hash tracks content") {
    auto a = parse_config(recipes()[0].config);
    auto b = a;
    b.seed += 1;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("config: errors name the field") {
    auto message = [](const std::string& text) {
        try {
            (void)parse_config(text);
        } catch (const InvalidArgument& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("[gowers]\nbogus = 1\n").find("bogus") != std::string::npos);
    CHECK(message("kind = mean\nkind = gowers\n").find("kind") != std::string::npos);
    CHECK(message("kind = nonsense\n").find("kind") != std::string::npos);
    CHECK(message("[checkpoints]\nvalues = 5, x\n").find("values") != std::string::npos);
    CHECK(message("[nosuch]\n").find("nosuch") != std::string::npos);
    CHECK(message("seed = 1\n[gowers]\nmethod = slow\n").find("line 3") != std::string::npos);
}

TEST_CASE("run: multiavg box example gives one") {
    const auto c = parse_config("kind = multiavg\n[functions]\nf = one\nf = one\n[forms]\nL = [1,0]\nL = [0,1]\n"
                                "[checkpoints]\nvalues = 10\n");
    int rc = -1;
    const auto csv = run_to_string(c, &rc);
    CHECK(rc == kExitOk);
    const auto rows = data_rows(csv);
    REQUIRE(rows.size() == 1);
    const auto t = run_experiment(c);
    const auto re = std::find(t.columns.begin(), t.columns.end(), "raw_re");
    const auto im = std::find(t.columns.begin(), t.columns.end(), "raw_im");
    REQUIRE(re != t.columns.end());
    REQUIRE(im != t.columns.end());
    CHECK(std::stod(t.rows[0][re - t.columns.begin()]) == 1.0);
    CHECK(std::stod(t.rows[0][im - t.columns.begin()]) == 0.0);
}

TEST_CASE("run: header layout") {
    const auto c = parse_config(recipes()[0].config);
    const auto csv = run_to_string(c);
    std::istringstream in(csv);
    std::string l1, l2, l3, l4;
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, l3);
    std::getline(in, l4);
    CHECK(l1 == "# multavg-lab gowers");
    CHECK(l2 == "# schema gowers/" + std::to_string(kSchemaVersion));
    CHECK(l3 == "# version " + std::string(kVersion));
    CHECK(l4 == "# config_hash fnv1a64:" + config_hash(c));
    CHECK(csv.find("# wall_time_s") != std::string::npos);
}

TEST_CASE("run: parity Gowers rows") {
    const auto t = run_experiment(parse_config(recipes()[0].config));
    REQUIRE(t.rows.size() == 2);
    const auto col = std::find(t.columns.begin(), t.columns.end(), "norm") - t.columns.begin();
    REQUIRE(col < std::ptrdiff_t(t.columns.size()));
    CHECK(std::stod(t.rows[0][col]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::stod(t.rows[1][col]) == doctest::Approx(std::pow(3.0, -0.25)).epsilon(1e-3));
}

TEST_CASE("run: counterexample recipe") {
    const auto t = run_experiment(parse_config(recipes()[4].config));
    CHECK(t.rows.size() == 4);
    const auto col = std::find(t.columns.begin(), t.columns.end(), "modulus") - t.columns.begin();
    REQUIRE(col < std::ptrdiff_t(t.columns.size()));
    CHECK(std::stod(t.rows[3][col]) == doctest::Approx(1.0 / std::sqrt(1.0 + 4.0 * M_PI * M_PI)).epsilon(0.02));
}

TEST_CASE("run: every recipe runs") {
    for (const auto& r : recipes()) {
        CAPTURE(r.id);
        int rc = -1;
        const auto csv = run_to_string(parse_config(r.config), &rc);
        CHECK(rc == kExitOk);
        CHECK_FALSE(data_rows(csv).empty());
    }
}

TEST_CASE("run: output is deterministic and thread independent") {
    for (int idx : {3, 5, 6, 8}) {
        auto c = parse_config(recipes()[idx].config);
        CAPTURE(recipes()[idx].id);
        c.threads = 1;
        const auto one = strip_wall_time(run_to_string(c));
        CHECK(one == strip_wall_time(run_to_string(c)));
        c.threads = 3;
        auto three = strip_wall_time(run_to_string(c));
        // The thread count is part of the hashed config; compare the rest.
        auto drop_hash = [](std::string s) {
            const auto p = s.find("# config_hash");
            return s.erase(p, s.find('\n', p) - p);
        };
        CHECK(drop_hash(one) == drop_hash(three));
    }
}

TEST_CASE("run: exit codes") {
    std::ostringstream out, err;
    auto bad = parse_config("kind = multiavg\n[functions]\nf = one\n[forms]\nL = [1,0]\nL = [1,1]\n"
                            "[checkpoints]\nvalues = 10\n");
    CHECK(run(bad, out, err) == kExitConfig);
    CHECK_FALSE(err.str().empty());

    auto big = parse_config("kind = gowers\n[functions]\nf = liouville\n[checkpoints]\nvalues = 100000\n"
                            "[gowers]\ns = 4\nmethod = recursive\n");
    CHECK(run(big, out, err) == kExitCostGuard);

    auto code_for = [](auto thrower) {
        std::ostringstream e;
        try {
            thrower();
        } catch (...) {
            return exit_code_for_current_exception(e);
        }
        return -1;
    };
    CHECK(code_for([] { throw NumericFailure("quadrature did not converge", 1e-3); }) == kExitNumeric);
    CHECK(code_for([] { throw CostGuardExceeded("too big"); }) == kExitCostGuard);
    CHECK(code_for([] { throw DomainViolation("outside"); }) == kExitConfig);
    CHECK(code_for([] { throw std::runtime_error("other"); }) == 1);
}

TEST_CASE("fixtures: catalog") {
    const auto text = list_fixtures();
    CHECK(text.find("multavg fixtures v" + std::to_string(kCatalogVersion)) == 0);
    CHECK(text.find("liouville") != std::string::npos);
    CHECK(text.find("archimedean-conjugate-pair") != std::string::npos);
    std::set<int> criteria;
    std::set<std::string> ids;
    for (const auto& r : recipes()) {
        criteria.insert(r.criterion);
        ids.insert(r.id);
    }
    CHECK(recipes().size() == 10);
    CHECK(criteria.size() == 10);
    CHECK(*criteria.begin() == 1);
    CHECK(*criteria.rbegin() == 10);
    CHECK(ids.size() == 10);
    for (const auto& s : example_systems()) CHECK_FALSE(s.forms.empty());
}

TEST_CASE("executable: subcommands, files and exit codes") {
    const std::string exe = MULTAVG_LAB_EXE;
    const auto cfg = temp_path("box.ini");
    const auto out = temp_path("box.csv");
    {
        std::ofstream f(cfg);
        f << "kind = multiavg\n[functions]\nf = one\nf = one\n[forms]\nL = [1,0]\nL = [0,1]\n"
             "[checkpoints]\nvalues = 10\n";
    }
    CHECK(shell(exe + " multiavg --config " + cfg.string() + " --out " + out.string() + " --threads 2") == 0);
    const auto csv = slurp(out);
    CHECK(csv.find("# multavg-lab multiavg") == 0);
    CHECK(data_rows(csv).size() == 1);

    CHECK(shell(exe + " fixtures > " + out.string()) == 0);
    CHECK(slurp(out).find("liouville") != std::string::npos);

    CHECK(shell(exe + " multiavg --config " + cfg.string() + " --print-config > " + out.string()) == 0);
    CHECK(parse_config(slurp(out)) == parse_config(slurp(cfg)));

    {
        std::ofstream f(cfg);
        f << "kind = multiavg\n[functions]\nf = one\n[bogus_section]\n";
    }
    CHECK(shell(exe + " multiavg --config " + cfg.string() + " 2> " + out.string()) == 2);
    CHECK(shell(exe + " multiavg --config /nonexistent/path.ini 2> " + out.string()) == 2);
    CHECK(shell(exe + " --no-such-flag 2> " + out.string()) == 2);

    {
        std::ofstream f(cfg);
        f << "kind = gowers\n[functions]\nf = liouville\n[checkpoints]\nvalues = 100000\n[gowers]\ns = 4\n"
             "method = recursive\n";
    }
    CHECK(shell(exe + " gowers --config " + cfg.string() + " 2> " + out.string()) == 3);

    std::filesystem::remove(cfg);
    std::filesystem::remove(out);
}
