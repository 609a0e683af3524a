#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "dptda/io.hpp"
#include "dptda/rng.hpp"

using namespace dptda;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("dptda_test_" + std::to_string(std::rand()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("full-precision formatting round-trips exactly") {
    Rng rng(101);
    for (int rep = 0; rep < 2000; ++rep) {
        double value = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12.0, 12.0));
        const std::string text = format_full(value);
        CHECK(std::strtod(text.c_str(), nullptr) == value);
    }
    CHECK(std::strtod(format_full(0.1).c_str(), nullptr) == 0.1);
}

TEST_CASE("points csv round trip is exact") {
    TempDir dir;
    Rng rng(102);
    PointCloud cloud(3, {});
    for (int i = 0; i < 40; ++i) {
        std::vector<double> p{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        cloud.push_back(p);
    }
    const std::string path = dir.file("points.csv");
    write_points_csv(path, cloud);
    const PointCloud back = read_points_csv(path);
    REQUIRE(back.size() == cloud.size());
    REQUIRE(back.dim() == cloud.dim());
    CHECK(back.coords() == cloud.coords());
}

TEST_CASE("points csv accepts a header and skips blank lines") {
    TempDir dir;
    const std::string path = dir.file("with_header.csv");
    write_text(path, "x,y,z\n1,2,3\n\n4,5,6\n");
    const PointCloud cloud = read_points_csv(path);
    REQUIRE(cloud.size() == 2);
    CHECK(cloud.point(1)[2] == 6.0);
}

TEST_CASE("points csv errors carry the line number") {
    TempDir dir;
    const std::string path = dir.file("bad.csv");
    write_text(path, "1,2\n3,oops\n");
    try {
        read_points_csv(path);
        FAIL("expected a data error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }

    const std::string ragged = dir.file("ragged.csv");
    write_text(ragged, "1,2\n3\n");
    CHECK_THROWS_AS(read_points_csv(ragged), std::runtime_error);

    const std::string empty = dir.file("empty.csv");
    write_text(empty, "");
    try {
        read_points_csv(empty);
        FAIL("expected a parameter error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()) == "no points");
    }
}

TEST_CASE("diagram json round trip is exact, including infinities") {
    TempDir dir;
    Rng rng(103);
    DiagramTuple tuple = make_empty_tuple(1);
    tuple.diagrams[0].pairs = {{0.0, 0.748291748291},
                               {0.1, kInfiniteDeath},
                               {1.0 / 3.0, 2.0 / 3.0}};
    tuple.diagrams[1].pairs = {{0.25, 0.625}};
    const std::string path = dir.file("diagram.json");
    write_diagram_json(path, tuple, 3.25);
    const auto [back, cap] = read_diagram_json(path);
    CHECK(cap == 3.25);
    REQUIRE(back.diagrams.size() == 2);
    for (std::size_t q = 0; q < 2; ++q) {
        REQUIRE(back.diagrams[q].pairs.size() == tuple.diagrams[q].pairs.size());
        for (std::size_t i = 0; i < back.diagrams[q].pairs.size(); ++i) {
            CHECK(back.diagrams[q].pairs[i].birth == tuple.diagrams[q].pairs[i].birth);
            CHECK(back.diagrams[q].pairs[i].death == tuple.diagrams[q].pairs[i].death);
        }
    }
}

TEST_CASE("diagram json rejects invalid documents") {
    TempDir dir;
    const std::string path = dir.file("invalid.json");
    write_text(path, "{ not json");
    CHECK_THROWS_AS(read_diagram_json(path), std::runtime_error);

    const std::string bad_pairs = dir.file("bad_pairs.json");
    write_text(bad_pairs,
               R"({"ell":0,"cap":1.0,"diagrams":[{"dim":0,"pairs":[{"birth":2.0,"death":1.0}]}]})");
    CHECK_THROWS(read_diagram_json(bad_pairs));
}

TEST_CASE("trace csv layout") {
    TempDir dir;
    MechanismTrace trace;
    trace.rows.push_back({1, -0.5, true, {0.25, 0.25}});
    trace.rows.push_back({2, -0.5, false, {0.25, 0.25}});
    const std::string path = dir.file("trace.csv");
    write_trace_csv(path, trace);
    std::ifstream in(path);
    std::string header, row1;
    std::getline(in, header);
    std::getline(in, row1);
    CHECK(header == "iter,utility,accepted,db_dim0,db_dim1");
    CHECK(row1.rfind("1,-0.5", 0) == 0);
}

TEST_CASE("sweep csv layout") {
    TempDir dir;
    SweepResult result;
    result.rows.push_back({0.1, 0, {0.5, 0.25}, 0.75});
    result.rows.push_back({0.1, 1, {0.4, 0.2}, 0.6});
    result.summary.push_back({0.1, 0.6, 0.675, 0.75});
    result.log_log_slope = -1.0;
    const std::string csv_path = dir.file("results.csv");
    write_sweep_csv(csv_path, result, "epsilon");
    std::ifstream in(csv_path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "axis,value,rep,db0,db1,total");
    CHECK(row.rfind("epsilon,0.1", 0) == 0);

    const std::string svg_path = dir.file("plot.svg");
    write_sweep_svg(svg_path, result, "epsilon");
    std::ifstream svg(svg_path);
    std::string all((std::istreambuf_iterator<char>(svg)), std::istreambuf_iterator<char>());
    CHECK(all.find("<svg") != std::string::npos);
    CHECK(all.find("polyline") != std::string::npos);
    CHECK(all.find("polygon") != std::string::npos);
}
