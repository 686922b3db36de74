// End-to-end checks of the command-line tool (spawned as a subprocess).

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

std::string bin() { return SATOTATE_BIN; }

std::string tmp(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

int run(const std::string& args, const std::string& out_file = "") {
    std::string cmd = bin() + " " + args;
    if (!out_file.empty()) cmd += " > " + out_file;
    cmd += " 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("characters subcommand, genus 1 Chebyshev ladder") {
    const std::string out = tmp("cli_chars_g1.txt");
    REQUIRE(run("characters -g 1 -d 2 --basis chi", out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("1") != std::string::npos);
    CHECK(text.find("chi_1") != std::string::npos);
    CHECK(text.find("chi_1^2 - 1") != std::string::npos);
    fs::remove(out);
}

TEST_CASE("characters csv matches the s-basis table") {
    const std::string out = tmp("cli_chars_csv.txt");
    REQUIRE(run("characters -g 2 -d 3 --basis s --format csv", out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("0,3,s_2^3 - 2*s_1^2*s_2 + 5*s_2^2 - s_1^2 + 7*s_2 + 2") !=
          std::string::npos);
    CHECK(run("characters -g 2 -d 1 --format nope", out) == 1);
    fs::remove(out);
}

TEST_CASE("count writes an ingestible file; bad primes are skipped") {
    const std::string data = tmp("cli_count_g2.txt");
    REQUIRE(run("count --curve \"y^2=x^5+x+1\" --first 16 --out " + data) == 0);
    const std::string text = slurp(data);
    CHECK(text.find("# label=y^2=x^5+x+1 genus=2 kind=tilde_a") !=
          std::string::npos);
    // disc = 3 * 7^2 * 23: rows start at p=5 and never contain p=7 or 23
    CHECK(text.find("\n5,") != std::string::npos);
    CHECK(text.find("\n7,") == std::string::npos);
    CHECK(text.find("\n23,") == std::string::npos);
    int rows = 0;
    for (char c : text)
        if (c == '\n') ++rows;
    CHECK(rows == 17);  // header + 16 records
    fs::remove(data);
}

TEST_CASE("malformed curve text fails with exit code 1") {
    CHECK(run("count --curve \"y^2=x^5+oops\" --first 2 --out /dev/null") == 1);
    // missing required flags and unknown flags are usage errors too
    CHECK(run("count --first 2 --out /dev/null") == 1);
    CHECK(run("characters --genus 2 --degree 1 --frobnicate") == 1);
}

TEST_CASE("sample then analyze round trip; reports are deterministic") {
    const std::string data = tmp("cli_sample.txt");
    const std::string rep1 = tmp("cli_rep1.csv");
    const std::string rep2 = tmp("cli_rep2.csv");
    REQUIRE(run("sample --group 'SO2*SO2' --count 1024 --seed 5 --out " + data) ==
            0);
    REQUIRE(run("analyze --data " + data +
                " --group 'SO2*SO2' -d 1 --nodes 64 --out " + rep1,
                "/dev/null") == 0);
    REQUIRE(run("analyze --data " + data +
                " --group 'SO2*SO2' -d 1 --nodes 64 --out " + rep2,
                "/dev/null") == 0);
    CHECK(slurp(rep1) == slurp(rep2));
    CHECK(slurp(rep1).find("# Err") != std::string::npos);
    fs::remove(data);
    fs::remove(rep1);
    fs::remove(rep2);
}

TEST_CASE("seeded synthetic sampling is bit-identical across runs") {
    const std::string a = tmp("cli_seed_a.txt");
    const std::string b = tmp("cli_seed_b.txt");
    REQUIRE(run("sample --group 'SU2*USp(4)' --count 512 --seed 42 --out " + a) ==
            0);
    REQUIRE(run("sample --group 'SU2*USp(4)' --count 512 --seed 42 --out " + b) ==
            0);
    CHECK(slurp(a) == slurp(b));
    fs::remove(a);
    fs::remove(b);
}

TEST_CASE("genus mismatch between data and group exits with code 2") {
    const std::string data = tmp("cli_mismatch.txt");
    REQUIRE(run("sample --group SU2 --count 64 --seed 1 --out " + data) == 0);
    CHECK(run("analyze --data " + data + " --group 'USp(4)' -d 1 --nodes 16",
              "/dev/null") == 2);
    fs::remove(data);
}

TEST_CASE("converge emits one row per chunk and handles oversized chunks") {
    const std::string data = tmp("cli_conv.txt");
    const std::string csv = tmp("cli_conv.csv");
    REQUIRE(run("sample --group SU2 --count 300 --seed 2 --out " + data) == 0);
    REQUIRE(run("converge --data " + data +
                " --group SU2 -d 2 --chunk 100 --nodes 32 --out " + csv,
                "/dev/null") == 0);
    {
        const std::string text = slurp(csv);
        int rows = 0;
        for (char c : text)
            if (c == '\n') ++rows;
        CHECK(rows == 4);  // header + 3 steps
    }
    REQUIRE(run("converge --data " + data +
                " --group SU2 -d 2 --chunk 1000 --nodes 32 --out " + csv,
                "/dev/null") == 0);
    {
        const std::string text = slurp(csv);
        int rows = 0;
        for (char c : text)
            if (c == '\n') ++rows;
        CHECK(rows == 1);  // header only: chunk exceeds the data
    }
    // --plot writes a script next to the CSV
    REQUIRE(run("converge --data " + data +
                " --group SU2 -d 2 --chunk 100 --nodes 32 --plot --out " + csv,
                "/dev/null") == 0);
    CHECK(fs::exists(csv + ".plot.py"));
    fs::remove(data);
    fs::remove(csv);
    fs::remove(csv + ".plot.py");
}

TEST_CASE("moments subcommand emits sample and expected columns") {
    const std::string data = tmp("cli_mom.txt");
    const std::string csv = tmp("cli_mom.csv");
    REQUIRE(run("sample --group 'USp(4)' --count 2048 --seed 3 --out " + data) ==
            0);
    REQUIRE(run("moments --data " + data +
                " --index 1 --max-order 4 --nodes 64 --out " + csv,
                "/dev/null") == 0);
    const std::string text = slurp(csv);
    CHECK(text.find("# n,sample,expected") != std::string::npos);
    // expected column carries the exact moments 0, 1, 0, 3
    {
        std::istringstream is(text);
        std::string line;
        std::getline(is, line);  // header
        const double expect[4] = {0, 1, 0, 3};
        for (int n = 1; n <= 4; ++n) {
            REQUIRE(static_cast<bool>(std::getline(is, line)));
            const auto last = line.rfind(',');
            CHECK(std::abs(std::stod(line.substr(last + 1)) - expect[n - 1]) <=
                  1e-6);
        }
    }
    fs::remove(data);
    fs::remove(csv);
}

TEST_CASE("product-basis analysis over a synthetic product sample") {
    const std::string data = tmp("cli_prod.txt");
    REQUIRE(run("sample --group 'SU2*USp(4)' --count 1024 --seed 9 --out " + data) ==
            0);
    const std::string out = tmp("cli_prod_out.txt");
    REQUIRE(run("analyze --data " + data +
                " --group 'SU2*USp(4)' --product-basis --per-factor 2 "
                "--nodes 32",
                out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("Err") != std::string::npos);
    fs::remove(data);
    fs::remove(out);
}
