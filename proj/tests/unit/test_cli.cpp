#include "cli.hpp"
#include "report.hpp"
#include "tables.hpp"

#include <json.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace resetfpt::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

struct Csv {
    std::vector<std::string> meta;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string at(std::size_t row, const std::string& column) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == column) return rows.at(row).at(i);
        }
        FAIL("no column " << column);
        return {};
    }
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            csv.meta.push_back(line.substr(2));
        } else if (csv.header.empty()) {
            csv.header = split(line);
        } else {
            csv.rows.push_back(split(line));
        }
    }
    return csv;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("reset_fpt_test_" + name);
}

}  // namespace

TEST_CASE("mean of the Brownian passage time at the tabulated optimum", "[cli]") {
    const auto r = run_cli({"mean", "--model", "bm", "--eta", "0", "--kind", "fpt", "--x", "1", "--x-r", "1",
                            "--r", "1.269"});
    REQUIRE(r.code == kOk);
    const Csv csv = parse_csv(r.out);
    REQUIRE(csv.rows.size() == 1);
    CHECK(csv.header == std::vector<std::string>{"x", "x_r", "r", "value"});
    // 12 significant digits.
    CHECK(csv.at(0, "value") == "3.08827749556");
    CHECK(std::stod(csv.at(0, "value")) == Catch::Approx(3.088).epsilon(1e-3));
}

TEST_CASE("start on the boundary gives zero", "[cli]") {
    const auto r = run_cli({"mean", "--model", "bm", "--kind", "fpt", "--x", "0", "--x-r", "1", "--r", "5"});
    REQUIRE(r.code == kOk);
    CHECK(parse_csv(r.out).at(0, "value") == "0");
}

TEST_CASE("exit codes", "[cli][errors]") {
    SECTION("usage") {
        CHECK(run_cli({"mean", "--bogus"}).code == kUsage);
        CHECK(run_cli({"frobnicate"}).code == kUsage);
        CHECK(run_cli({}).code == kUsage);
        CHECK(run_cli({"mean", "--x", "abc"}).code == kUsage);
        CHECK(run_cli({"mean", "--format", "xml"}).code == kUsage);
        CHECK(run_cli({"scan", "--model", "bm", "--kind", "fpt", "--x", "1", "--x-r", "1", "--r-grid", "1:2"}).code ==
              kUsage);
        CHECK(run_cli({"mean", "--model", "gbm", "--kind", "fpt", "--x", "1", "--x-r", "1", "--r", "1"}).code ==
              kUsage);
        CHECK(run_cli({"mean", "--command", "optimize"}).code == kUsage);
    }
    SECTION("validation") {
        const auto missing = run_cli({"mean", "--model", "bm", "--kind", "fpt", "--x", "1", "--r", "1"});
        CHECK(missing.code == kValidation);
        CHECK(missing.err.find("x_r") != std::string::npos);
        CHECK(missing.out.empty());
        CHECK(run_cli({"mean", "--model", "ou", "--mu", "-1", "--kind", "fpt", "--x", "1", "--x-r", "1", "--r", "1"})
                  .code == kValidation);
        CHECK(run_cli({"mean", "--model", "bm", "--kind", "fpt", "--b", "2", "--x", "1", "--x-r", "1", "--r", "1"})
                  .code == kValidation);
        CHECK(run_cli({"mean", "--model", "bm", "--kind", "fet", "--x", "0.5", "--x-r", "0.5", "--r", "1"}).code ==
              kValidation);
        CHECK(run_cli({"mean", "--model", "bm", "--kind", "fpt", "--x", "1", "--x-r", "1", "--r", "-2"}).code ==
              kValidation);
        CHECK(run_cli({"table", "--name", "tab99"}).code == kValidation);
        CHECK(run_cli({"table"}).code == kValidation);
    }
    SECTION("computation") {
        const auto r = run_cli({"mean", "--model", "ou", "--kind", "fpt", "--x", "1", "--x-r", "1", "--r", "1e12"});
        CHECK(r.code == kComputation);
        CHECK(r.err.find("computation error") != std::string::npos);
        CHECK(run_cli({"mean", "--model", "ou", "--sigma", "1e-200", "--kind", "fpt", "--x", "1", "--x-r", "1",
                       "--r", "1"})
                  .code == kComputation);
    }
    SECTION("help") {
        const auto r = run_cli({"--help"});
        CHECK(r.code == kOk);
        CHECK(r.out.find("--x-grid") != std::string::npos);
    }
}

TEST_CASE("key-value configuration file", "[cli]") {
    const auto path = temp_path("config.ini");
    {
        std::ofstream f(path);
        f << "command = optimize\nmodel = bm\nkind = fpt\nx = 1\nx_r = 1\n";
    }
    const auto r = run_cli({"--config", path.string()});
    REQUIRE(r.code == kOk);
    const Csv csv = parse_csv(r.out);
    CHECK(std::stod(csv.at(0, "r_m")) == Catch::Approx(1.2698).epsilon(1e-4));

    // Command-line flags win over the file.
    const auto over = run_cli({"--config", path.string(), "--x", "2", "--x-r", "2"});
    REQUIRE(over.code == kOk);
    CHECK(std::stod(parse_csv(over.out).at(0, "r_m")) == Catch::Approx(0.31745).epsilon(1e-4));
    std::filesystem::remove(path);
}

TEST_CASE("JSON output re-emits byte for byte", "[cli]") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"optimize", "--model", "ou", "--kind", "fpt", "--x", "0.5", "--x-r", "0.5", "--format", "json"},
             {"scan", "--model", "bm", "--kind", "fpt", "--x", "1", "--x-r", "1", "--r-grid", "0:10:11@lin",
              "--format", "json"},
             {"table", "--name", "tab4", "--format", "json"}}) {
        const auto r = run_cli(args);
        REQUIRE(r.code == kOk);
        const auto doc = nlohmann::json::parse(r.out);
        CHECK(doc.contains("meta"));
        CHECK(doc.contains("rows"));
        CHECK(doc.dump(2) + "\n" == r.out);
    }
}

TEST_CASE("identical configuration gives identical bytes", "[cli]") {
    const std::vector<std::string> args = {"simulate", "--model", "bm", "--kind", "fpt", "--x", "1", "--x-r", "1",
                                           "--r", "1.269", "--dt", "4e-3", "--paths", "3000", "--seed", "42"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.code == kOk);
    CHECK(a.out == b.out);
    const Csv csv = parse_csv(a.out);
    CHECK(csv.at(0, "n_paths") == "3000");
    CHECK(std::abs(std::stod(csv.at(0, "z_score"))) < 4.0);
}

TEST_CASE("output file", "[cli]") {
    const auto path = temp_path("out.csv");
    const auto r = run_cli({"mean", "--model", "bm", "--kind", "fpt", "--x", "1", "--x-r", "1", "--r", "1",
                            "--out", path.string()});
    REQUIRE(r.code == kOk);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(parse_csv(ss.str()).rows.size() == 1);
    std::filesystem::remove(path);
    CHECK(run_cli({"mean", "--model", "bm", "--kind", "fpt", "--x", "1", "--x-r", "1", "--r", "1", "--out",
                   "/nonexistent/dir/out.csv"})
              .code == kValidation);
}

TEST_CASE("every command produces rows", "[cli]") {
    const std::vector<std::string> bm = {"--model", "bm", "--kind", "fpt", "--x-r", "1"};
    auto with = [&](std::vector<std::string> head) {
        head.insert(head.end(), bm.begin(), bm.end());
        return head;
    };
    {
        const auto r = run_cli(with({"lt", "--x", "1", "--r", "2", "--lam", "1"}));
        REQUIRE(r.code == kOk);
        const Csv csv = parse_csv(r.out);
        const double m = std::stod(csv.at(0, "value"));
        const double q = std::stod(csv.at(0, "survival_lt"));
        CHECK(m == Catch::Approx(1.0 - q).epsilon(1e-10));
    }
    {
        const auto r = run_cli(with({"second-moment", "--x", "1", "--r", "1.269"}));
        REQUIRE(r.code == kOk);
        const Csv csv = parse_csv(r.out);
        CHECK(std::stod(csv.at(0, "value")) >= std::pow(std::stod(csv.at(0, "mean")), 2));
    }
    {
        const auto r = run_cli(with({"scan", "--x", "1", "--r-grid", "0.01:100:9@log"}));
        REQUIRE(r.code == kOk);
        CHECK(parse_csv(r.out).rows.size() == 9);
    }
    {
        const auto r = run_cli(with({"profile", "--x-grid", "0.5:5:4"}));
        REQUIRE(r.code == kOk);
        const Csv csv = parse_csv(r.out);
        CHECK(csv.rows.size() == 4);
        CHECK(csv.at(3, "x") == "5");
        CHECK(std::find(csv.meta.begin(), csv.meta.end(), "x_r: 1") != csv.meta.end());
    }
    {
        const auto r = run_cli({"simulate", "--model", "ou", "--kind", "fpt", "--x", "0.5", "--x-r", "0.5", "--r",
                                "3.1", "--exact", "--dt", "2e-3", "--paths", "2000"});
        REQUIRE(r.code == kOk);
        CHECK(r.out.find("integrator: ou-exact") != std::string::npos);
    }
}

TEST_CASE("table regeneration", "[cli]") {
    {
        const auto r = run_cli({"table", "--name", "tab1"});
        REQUIRE(r.code == kOk);
        const Csv csv = parse_csv(r.out);
        REQUIRE(csv.rows.size() == 7);
        const std::vector<std::string> xs = {"0.1", "0.5", "1", "2", "3", "5", "10"};
        for (std::size_t i = 0; i < xs.size(); ++i) CHECK(csv.at(i, "x") == xs[i]);
        CHECK(std::stod(csv.at(2, "r_m")) == Catch::Approx(1.269).epsilon(1e-3));
        CHECK(std::stod(csv.at(2, "m")) == Catch::Approx(3.088).epsilon(1e-3));
        CHECK(csv.at(2, "ref_r_m") == "1.269");
        CHECK(csv.at(2, "ref_T0").empty());
        CHECK(csv.at(2, "rel_diff_T0").empty());
    }
    {
        const Csv csv = parse_csv(run_cli({"table", "--name", "tab5"}).out);
        REQUIRE(csv.rows.size() == 6);
        for (std::size_t i = 0; i < csv.rows.size(); ++i) CHECK(csv.at(i, "r_m") == "0");
    }
    {
        const Csv csv = parse_csv(run_cli({"table", "--name", "tab9"}).out);
        bool found = false;
        for (std::size_t i = 0; i < csv.rows.size(); ++i) {
            if (csv.at(i, "x") != "0.7") continue;
            found = true;
            CHECK(std::stod(csv.at(i, "r_m")) == Catch::Approx(0.33).epsilon(0.05));
            CHECK(std::stod(csv.at(i, "m")) == Catch::Approx(0.89).epsilon(0.01));
        }
        CHECK(found);
    }
    CHECK(table_catalog().size() == 13);
    for (const auto& t : table_catalog()) {
        INFO(t.name);
        CHECK(run_cli({"table", "--name", t.name}).code == kOk);
    }
}

TEST_CASE("number formatting and relative differences", "[cli]") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1e-20) == "1e-20");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(round12(1.0 / 3.0) == 0.333333333333);

    CHECK(relative_difference(1.1, 1.0) == Catch::Approx(0.1));
    CHECK(relative_difference(0.0, 0.0) == 0.0);
    CHECK(std::isnan(relative_difference(0.1, 0.0)));
    CHECK(std::isnan(relative_difference(1.0, std::nan(""))));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(relative_difference(inf, inf) == 0.0);
    CHECK(std::isnan(relative_difference(2.0, inf)));
}
