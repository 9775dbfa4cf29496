#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "twomode/run_config.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Sandbox {
 public:
  Sandbox() : dir_(fs::temp_directory_path() / ("twomode_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Sandbox() { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  Result run(const std::string& args) const {
    const std::string cmd = std::string(TWOMODE_CLI) + " " + args + " > " + path("stdout").string() +
                            " 2> " + path("stderr").string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(path("stdout")), slurp(path("stderr"))};
  }

 private:
  fs::path dir_;
};

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Csv read_csv(const fs::path& p) {
  std::ifstream in(p);
  Csv csv;
  std::string line, cell;
  std::getline(in, line);
  std::istringstream h(line);
  while (std::getline(h, cell, ',')) csv.header.push_back(cell);
  while (std::getline(in, line)) {
    std::istringstream r(line);
    std::vector<double> row;
    while (std::getline(r, cell, ',')) row.push_back(std::stod(cell));
    csv.rows.push_back(row);
  }
  return csv;
}

}  // namespace

TEST_CASE("exact run writes the trajectory columns and the free period") {
  Sandbox box;
  const auto r = box.run("exact --omega1 0.5 --omega2 0.7 --lambda 0.1 --horizon 200 --step 0.05 --out " +
                         box.path("fig1.csv").string());
  REQUIRE(r.code == 0);
  const auto csv = read_csv(box.path("fig1.csv"));
  CHECK(csv.header == std::vector<std::string>{"time", "n1", "n2", "omega1_eff", "omega2_eff", "coupling_im"});
  // n1 swings between 1/2 and 1; measure the period from upward crossings of 3/4
  std::vector<double> ups;
  for (std::size_t i = 1; i < csv.rows.size(); ++i) {
    const double y0 = csv.rows[i - 1][1] - 0.75, y1 = csv.rows[i][1] - 0.75;
    if (y0 < 0 && y1 >= 0) ups.push_back(csv.rows[i - 1][0] - y0 * (csv.rows[i][0] - csv.rows[i - 1][0]) / (y1 - y0));
  }
  REQUIRE(ups.size() >= 5);
  const double period = (ups.back() - ups.front()) / static_cast<double>(ups.size() - 1);
  CHECK(std::abs(period - 22.2144) < 0.01);
  CHECK(json::parse(r.out)["period"].get<double>() == doctest::Approx(22.2144).epsilon(1e-5));
}

TEST_CASE("identical plans give byte-identical files") {
  Sandbox box;
  for (const std::string& args :
       {std::string("exact --format json"), std::string("induced --tau 2 --horizon 100"),
        std::string("generalized --lambda 0.3 --horizon 300")}) {
    REQUIRE(box.run(args + " --out " + box.path("a").string()).code == 0);
    REQUIRE(box.run(args + " --out " + box.path("b").string()).code == 0);
    CHECK(slurp(box.path("a")) == slurp(box.path("b")));
    CHECK(!slurp(box.path("a")).empty());
  }
}

TEST_CASE("generalized run reports its equilibrium") {
  Sandbox box;
  const auto r = box.run("generalized --alpha1 0 --alpha2 -1 --lambda 0.2 --out " + box.path("g.csv").string());
  REQUIRE(r.code == 0);
  const auto s = json::parse(r.out);
  CHECK(s["equilibrium"]["status"] == "converged");
  CHECK(std::abs(s["equilibrium"]["n1_eq"].get<double>() - 0.2771) < 0.01);
  CHECK(s["drift"].get<double>() < 1e-7);
}

TEST_CASE("fit recovers a synthetic tanh table") {
  Sandbox box;
  std::ostringstream csv;
  csv << "x,y\n";
  csv.precision(17);
  for (int i = 0; i <= 36; ++i) {
    const double x = 0.9 - 0.05 * i;
    csv << x << ',' << 0.45 + 0.4 * std::tanh(2.5 * x) << '\n';
  }
  box.write("pts.csv", csv.str());
  const auto r = box.run("fit --lambda 0.2 --input " + box.path("pts.csv").string() + " --format json --out " +
                         box.path("fit.json").string());
  REQUIRE(r.code == 0);
  const auto fit = json::parse(slurp(box.path("fit.json")));
  for (const char* key : {"a", "b", "c", "rms_residual", "n_points", "lambda", "alpha1", "alpha2"})
    CHECK(fit.contains(key));
  CHECK(std::abs(fit["a"].get<double>() - 0.45) < 1e-8);
  CHECK(std::abs(fit["b"].get<double>() - 0.4) < 1e-8);
  CHECK(std::abs(fit["c"].get<double>() - 2.5) < 1e-8);
  CHECK(fit["n_points"] == 37);
  CHECK(fit["lambda"] == 0.2);
}

TEST_CASE("sweep writes one row per grid point") {
  Sandbox box;
  box.write("sweep.json", R"({"mode": "sweep",
    "sweep": {"omega1_0": 1.0, "omega2_grid": [0.8, 1.0, 1.2], "lambda": 0.3, "alpha1": 0, "alpha2": -1}})");
  const auto r = box.run("sweep --config " + box.path("sweep.json").string() + " --out " + box.path("s.csv").string());
  REQUIRE(r.code == 0);
  const auto text = slurp(box.path("s.csv"));
  CHECK(text.rfind("x,n1_eq,status,settle_time\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(text.find(",converged,") != std::string::npos);
}

TEST_CASE("predict writes the law") {
  Sandbox box;
  const auto r = box.run("predict --alpha1 -1 --alpha2 1 --format json --out " + box.path("p.json").string());
  REQUIRE(r.code == 0);
  const auto p = json::parse(slurp(box.path("p.json")));
  CHECK(p["law_variant"] == "opposite-sign");
  CHECK(p["predicted_n1_eq"].get<double>() == doctest::Approx(0.8808).epsilon(1e-4));
}

TEST_CASE("configuration errors exit with 2 and name the problem") {
  Sandbox box;
  box.write("typo.json", "{\"mode\": \"exact\", \"params\": {\"lamda\": 0.1}}");
  auto r = box.run("exact --config " + box.path("typo.json").string());
  CHECK(r.code == 2);
  CHECK(r.err.find("params.lamda") != std::string::npos);

  box.write("broken.json", "{\n\"mode\": \"exact\",\n\"params\": {,}\n}");
  r = box.run("exact --config " + box.path("broken.json").string());
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);

  r = box.run("generalized --config " + box.path("typo.json").string());
  CHECK(r.code == 2);
  r = box.run("induced --tau 3 --horizon 100");
  CHECK(r.code == 2);
  r = box.run("exact --lambda -1");
  CHECK(r.code == 2);
  r = box.run("exact --format xml");
  CHECK(r.code == 2);
  r = box.run("sweep --omega2 0.5");
  CHECK(r.code == 2);
  r = box.run("");
  CHECK(r.code == 2);
}

TEST_CASE("simulation failures keep partial output flagged") {
  Sandbox box;
  const std::string args = "generalized --omega1 100 --omega2 99 --alpha2 0 --step 0.05 --horizon 400 --out ";
  auto r = box.run(args + box.path("d.csv").string());
  CHECK(r.code == 3);
  CHECK(fs::exists(box.path("d.csv")));
  CHECK(fs::exists(box.path("d.csv.partial")));

  r = box.run(args + box.path("d.json").string() + " --format json");
  CHECK(r.code == 3);
  const auto doc = json::parse(slurp(box.path("d.json")));
  CHECK(doc["partial"] == true);
  CHECK(doc["error"].get<std::string>().find("diverged") != std::string::npos);

  // a later clean run clears the marker
  r = box.run("generalized --horizon 300 --out " + box.path("d.csv").string());
  CHECK(r.code == 0);
  CHECK_FALSE(fs::exists(box.path("d.csv.partial")));
}

TEST_CASE("every shipped recipe loads and is listed exactly once") {
  const fs::path dir = TWOMODE_CONFIG_DIR;
  const std::string index = slurp(dir / "README.md");
  std::set<std::string> listed;
  const std::regex ref("`([a-z0-9_]+\\.json)`");
  for (auto it = std::sregex_iterator(index.begin(), index.end(), ref); it != std::sregex_iterator(); ++it) {
    const std::string name = (*it)[1];
    CHECK_MESSAGE(listed.insert(name).second, name << " listed twice");
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    ++files;
    const std::string name = entry.path().filename().string();
    CHECK_MESSAGE(listed.contains(name), name << " missing from the recipe list");
    CHECK_NOTHROW(twomode::load_config(entry.path()));
  }
  CHECK(files == listed.size());
}
