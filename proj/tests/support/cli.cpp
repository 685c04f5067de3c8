#include "support/cli.hpp"

#include "revsent/io.hpp"

#include <cstdlib>
#include <set>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace revsent::testing {

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = quoted(REVSENT_CLI_PATH) + " " + args + " > " + quoted(log) + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

nlohmann::json fast_config() {
    return nlohmann::json::parse(R"({
        "grids": {
            "nb": {"alpha": [1.0]},
            "lr": {"lambda": [0.001], "max_iters": 200},
            "svm": {"lambda": [0.001], "epochs": [10]},
            "rf": {"n_trees": [20], "max_depth": [12], "min_leaf": [2]}
        },
        "cv_folds": 2,
        "bootstrap": {"resamples": 200}
    })");
}

fs::path write_config(const fs::path& dir, const nlohmann::json& config) {
    const auto path = dir / "config.json";
    io::write_file(path, config.dump(2) + "\n");
    return path;
}

namespace {

std::set<fs::path> listing(const fs::path& root) {
    std::set<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out.insert(fs::relative(e.path(), root));
    }
    return out;
}

}  // namespace

std::string compare_trees(const fs::path& a, const fs::path& b) {
    const auto la = listing(a);
    const auto lb = listing(b);
    if (la != lb) return "file sets differ";
    for (const auto& rel : la) {
        if (io::read_file(a / rel) != io::read_file(b / rel)) return "bytes differ: " + rel.string();
    }
    if (la.empty()) return "no files";
    return {};
}

}  // namespace revsent::testing
