#include "support.hpp"

#include "cli.hpp"
#include "homsense/io.hpp"
#include "homsense/synth.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace homsense;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string err;
};

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("homsense_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs the installed binary so exit codes and stderr are observed as a user sees them.
Run run(const std::string& args) {
    const fs::path err = scratch() / "stderr.txt";
    const std::string cmd = std::string(HOMSENSE_BIN) + " " + args + " > /dev/null 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

std::string write(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string write_matrix(const std::string& name, const Matrix& M) {
    const fs::path p = scratch() / name;
    io::write_matrix_csv(p.string(), M);
    return p.string();
}

json read_json(const std::string& path) { return json::parse(slurp(path)); }

double stored_residual_check(const Matrix& A, const Vector& y, const json& j) {
    const auto x = j.at("x_hat").get<std::vector<double>>();
    const auto s = j.at("assignment").get<std::vector<Index>>();
    Vector xv = Eigen::Map<const Vector>(x.data(), static_cast<Index>(x.size()));
    double r2 = 0.0;
    for (Index t = 0; t < y.size(); ++t) {
        const double d = y(t) - A.row(s[static_cast<std::size_t>(t)] - 1).dot(xv);
        r2 += d * d;
    }
    return std::abs(std::sqrt(r2) - j.at("residual").get<double>());
}

} // namespace

TEST_CASE("solve identity example") {
    const auto A = write_matrix("I3.csv", Matrix::Identity(3, 3));
    const auto y = write("y123.csv", "1\n2\n3\n");
    const auto out = (scratch() / "id.json").string();
    REQUIRE(run("solve --matrix " + A + " --obs " + y + " --method bnb --out " + out).code == 0);
    const auto j = read_json(out);
    const auto x = j.at("x_hat").get<std::vector<double>>();
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(2.0));
    CHECK(x[2] == doctest::Approx(3.0));
    CHECK(j.at("residual").get<double>() < 1e-12);
    CHECK(j.at("assignment").get<std::vector<int>>() == std::vector<int>{1, 2, 3});
}

TEST_CASE("solve results round-trip for every method") {
    const auto inst = gen_instance(3, 20, 20, 0.5, 0.01, 77);
    const auto A = write_matrix("A.csv", inst.A);
    const auto y = write_matrix("y.csv", inst.y);
    for (const std::string method : {"bnb", "enum", "altmin-sort", "robust-l1", "altmin-op"}) {
        INFO(method);
        const auto out = (scratch() / ("r_" + method + ".json")).string();
        std::string extra = method == "robust-l1" ? " --lambda 0.05" : "";
        REQUIRE(run("solve --matrix " + A + " --obs " + y + " --method " + method + " --seed 3" + extra + " --out " + out)
                    .code == 0);
        const auto j = read_json(out);
        CHECK(j.at("method") == method);
        CHECK(stored_residual_check(inst.A, inst.y, j) < 1e-10);
    }
}

TEST_CASE("solve is deterministic") {
    const auto inst = gen_instance(2, 15, 12, 1.0, 0.02, 78);
    const auto A = write_matrix("A2.csv", inst.A);
    const auto y = write_matrix("y2.csv", inst.y);
    for (const std::string method : {"bnb", "enum"}) {
        const auto o1 = (scratch() / "d1.json").string(), o2 = (scratch() / "d2.json").string();
        REQUIRE(cli::run({"homsense", "solve", "--matrix", A, "--obs", y, "--method", method, "--seed", "4", "--out", o1}) == 0);
        REQUIRE(cli::run({"homsense", "solve", "--matrix", A, "--obs", y, "--method", method, "--seed", "4", "--out", o2}) == 0);
        auto j1 = read_json(o1), j2 = read_json(o2);
        j1.erase("wall_time");
        j2.erase("wall_time");
        CHECK(j1 == j2);
    }
}

TEST_CASE("solve error paths and exit codes") {
    const auto A = write_matrix("I3b.csv", Matrix::Identity(3, 3));
    const auto y = write("y3.csv", "1\n2\n3\n");
    const auto y2 = write("y2short.csv", "1\n2\n");

    const auto bad = write("bad.csv", "1,0,0\n0,1\n0,0,1\n");
    auto r = run("solve --matrix " + bad + " --obs " + y + " --method bnb");
    CHECK(r.code == 3);
    CHECK(r.err.find("bad.csv:2") != std::string::npos);

    r = run("solve --matrix " + A + " --obs " + y2 + " --method altmin-sort");
    CHECK(r.code == 4);
    CHECK(r.err.find("k = m") != std::string::npos);

    r = run("solve --matrix " + A + " --obs " + y + " --method robust-l1");
    CHECK(r.code == 4);
    CHECK(r.err.find("--lambda") != std::string::npos);

    r = run("solve --matrix " + A + " --obs " + write("y4.csv", "1\n2\n3\n4\n") + " --method bnb");
    CHECK(r.code == 4);

    r = run("solve --matrix " + A + " --obs " + y + " --method enum");
    CHECK(r.code == 4);
    CHECK(r.err.find("--seed") != std::string::npos);

    r = run("solve --matrix " + A + " --obs " + y + " --method bnb --box-half-width 1,2");
    CHECK(r.code == 2);

    CHECK(run("solve --matrix " + A + " --obs " + y + " --method magic").code == 2);
    CHECK(run("solve --matrix /nonexistent.csv --obs " + y + " --method bnb").code == 3);
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("--help").code == 0);
}

TEST_CASE("register identity problem and k > m") {
    Rng rng(79);
    const Matrix P = gaussian_matrix(8, 2, rng);
    const auto model = write_matrix("P.csv", P);
    const auto out = (scratch() / "reg.json").string();
    REQUIRE(run("register --model " + model + " --scene " + model + " --budget 20 --out " + out).code == 0);
    const auto j = read_json(out);
    const auto T = j.at("T").get<std::vector<double>>();
    const std::vector<double> id{1, 0, 0, 1, 0, 0};
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(T[i] - id[i]) < 1e-8);
    CHECK(j.at("residual").get<double>() < 1e-8);

    const auto small = write_matrix("Q3.csv", gaussian_matrix(3, 2, rng));
    CHECK(run("register --model " + model + " --scene " + small).code == 4);
    CHECK(run("register --model " + write("P3.csv", "1,2,3\n") + " --scene " + small).code == 3);
}

TEST_CASE("register bundled fish sample") {
    const std::string data = HOMSENSE_DATA_DIR;
    const auto out = (scratch() / "fish.json").string();
    REQUIRE(run("register --model " + data + "/fish_model.csv --scene " + data + "/fish_scene.csv --budget 60 --out " + out)
                .code == 0);
    const auto T = read_json(out).at("T").get<std::vector<double>>();
    const auto truth = json::parse(slurp(data + "/fish_truth.json")).at("T").get<std::vector<double>>();
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(T[i] - truth[i]) < 5e-3);
}

TEST_CASE("bench on a one-cell grid") {
    const auto grid = write("grid.json", R"({"methods": ["bnb", "altmin-op"], "n": 2, "m": 10, "k": 8,
        "shuffle_ratio": 1.0, "sigma": 0.01, "trials": 3, "bnb": {"max_depth": 8}})");
    const auto out = (scratch() / "records.csv").string();
    const auto summary = (scratch() / "summary.csv").string();
    REQUIRE(run("bench --grid " + grid + " --seed 11 --out " + out + " --summary " + summary).code == 0);
    std::istringstream csv(slurp(out));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "method,n,m,k,shuffle_ratio,sigma,seed,relative_error,wall_time,terminated_by");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == 6);
    CHECK(slurp(summary).find("median") != std::string::npos);

    CHECK(run("bench --grid " + grid + " --out " + out).code == 2);
    CHECK(run("bench --grid " + write("badgrid.json", "{\"methods\": [\"x\"]}") + " --seed 1 --out " + out).code == 3);
}

TEST_CASE("verify subcommand") {
    const auto out = (scratch() / "verify.json").string();
    REQUIRE(run("verify --suite eigen --seed 1 --out " + out).code == 0);
    const auto j = read_json(out);
    CHECK(j.at("passed").get<bool>());
    CHECK(!j.at("checks").empty());
    for (const auto& c : j.at("checks")) CHECK(c.contains("worst_margin"));

    CHECK(run("verify --suite generic-point --seed 1 --force-below-threshold").code == 5);
    CHECK(run("verify --suite eigen").code == 2);
    CHECK(run("verify --suite nope --seed 1").code == 2);
}
