#include "revsent/error.hpp"
#include "revsent/io.hpp"
#include "revsent/models.hpp"

#include <sstream>

namespace revsent::models {

using nlohmann::json;

namespace {

constexpr std::string_view kMagic = "revsent-model v1";

void write_values(std::ostringstream& out, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ' ';
        out << io::format_double(values[i]);
    }
    out << '\n';
}

Params params_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "nb") return NBParams{j.at("alpha").get<double>()};
    if (family == "lr") {
        return LRParams{j.at("lambda").get<double>(), j.at("max_iters").get<std::size_t>(), j.at("tol").get<double>(),
                        j.at("initial_step").get<double>()};
    }
    if (family == "svm") {
        return SVMParams{j.at("lambda").get<double>(), j.at("epochs").get<std::size_t>(),
                         j.at("seed").get<std::uint64_t>()};
    }
    if (family == "rf") {
        return RFParams{j.at("n_trees").get<std::size_t>(), j.at("max_depth").get<std::size_t>(),
                        j.at("min_leaf").get<std::size_t>(), j.at("features_per_split").get<std::size_t>(),
                        j.at("bootstrap").get<bool>(), j.at("seed").get<std::uint64_t>()};
    }
    throw ValidationError("model file: unknown family " + family);
}

class Reader {
public:
    explicit Reader(std::string_view data) : in_(std::string(data)) {}

    std::string line() {
        std::string l;
        if (!std::getline(in_, l)) throw ValidationError("model file: unexpected end of data");
        return l;
    }

    // "key rest..." -> rest
    std::string keyed(std::string_view key) {
        const std::string l = line();
        if (l.rfind(std::string(key) + " ", 0) != 0 && l != key) {
            throw ValidationError("model file: expected '" + std::string(key) + "'");
        }
        return l.size() > key.size() ? l.substr(key.size() + 1) : std::string{};
    }

    std::vector<double> values(std::size_t expected) {
        return parse_values(line(), expected);
    }

    static std::vector<double> parse_values(const std::string& l, std::size_t expected) {
        std::vector<double> out;
        out.reserve(expected);
        std::size_t start = 0;
        while (start < l.size()) {
            std::size_t end = l.find(' ', start);
            if (end == std::string::npos) end = l.size();
            out.push_back(io::parse_double(std::string_view(l).substr(start, end - start)));
            start = end + 1;
        }
        if (out.size() != expected) throw ValidationError("model file: wrong number of values");
        return out;
    }

private:
    std::istringstream in_;
};

Scores to_scores(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

}  // namespace

std::string serialize(const Model& model) {
    std::ostringstream out;
    out << kMagic << '\n';
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            out << "family " << to_string(family_of(Model{m})) << '\n';
            out << "dimension " << m.dimension << '\n';
            out << "params " << to_json(Params{m.params}).dump() << '\n';
            if constexpr (std::is_same_v<T, NBModel>) {
                out << "log_prior ";
                write_values(out, m.log_prior);
                for (std::size_t c = 0; c < kNumClasses; ++c) {
                    out << "log_likelihood " << c << '\n';
                    write_values(out, m.log_likelihood[c]);
                }
            } else if constexpr (std::is_same_v<T, LRModel>) {
                out << "iterations " << m.iterations << '\n';
                out << "final_objective " << io::format_double(m.final_objective) << '\n';
                out << "final_gradient_norm " << io::format_double(m.final_gradient_norm) << '\n';
                out << "bias ";
                write_values(out, m.bias);
                out << "weights\n";
                write_values(out, m.weights);
            } else if constexpr (std::is_same_v<T, SVMModel>) {
                out << "bias ";
                write_values(out, m.bias);
                out << "epoch_objective " << m.epoch_objective.size() << '\n';
                write_values(out, m.epoch_objective);
                out << "weights\n";
                write_values(out, m.weights);
            } else {
                out << "trees " << m.trees.size() << '\n';
                for (const auto& tree : m.trees) {
                    out << "nodes " << tree.nodes.size() << '\n';
                    for (const auto& node : tree.nodes) {
                        out << node.feature << ' ' << io::format_double(node.threshold) << ' ' << node.left << ' '
                            << node.right << ' ' << node.counts[0] << ' ' << node.counts[1] << ' '
                            << node.counts[2] << '\n';
                    }
                }
            }
        },
        model);
    return out.str();
}

Model deserialize(std::string_view data) {
    Reader r(data);
    if (r.line() != kMagic) throw ValidationError("model file: bad magic line");
    const std::string family = r.keyed("family");
    const std::size_t d = std::stoull(r.keyed("dimension"));
    const json pj = json::parse(r.keyed("params"), nullptr, false);
    if (pj.is_discarded()) throw ValidationError("model file: bad params line");
    const Params params = params_from_json(pj);
    if (to_string(family_of(params)) != family) throw ValidationError("model file: family/params mismatch");

    if (family == "nb") {
        NBModel m;
        m.params = std::get<NBParams>(params);
        m.dimension = d;
        m.log_prior = to_scores(Reader::parse_values(r.keyed("log_prior"), kNumClasses));
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            r.keyed("log_likelihood");
            m.log_likelihood[c] = r.values(d);
        }
        return m;
    }
    if (family == "lr") {
        LRModel m;
        m.params = std::get<LRParams>(params);
        m.dimension = d;
        m.iterations = std::stoull(r.keyed("iterations"));
        m.final_objective = io::parse_double(r.keyed("final_objective"));
        m.final_gradient_norm = io::parse_double(r.keyed("final_gradient_norm"));
        m.bias = to_scores(Reader::parse_values(r.keyed("bias"), kNumClasses));
        r.keyed("weights");
        m.weights = r.values(kNumClasses * d);
        return m;
    }
    if (family == "svm") {
        SVMModel m;
        m.params = std::get<SVMParams>(params);
        m.dimension = d;
        m.bias = to_scores(Reader::parse_values(r.keyed("bias"), kNumClasses));
        const std::size_t epochs = std::stoull(r.keyed("epoch_objective"));
        m.epoch_objective = r.values(epochs);
        r.keyed("weights");
        m.weights = r.values(kNumClasses * d);
        return m;
    }
    RFModel m;
    m.params = std::get<RFParams>(params);
    m.dimension = d;
    const std::size_t n_trees = std::stoull(r.keyed("trees"));
    m.trees.resize(n_trees);
    for (auto& tree : m.trees) {
        const std::size_t n_nodes = std::stoull(r.keyed("nodes"));
        tree.nodes.resize(n_nodes);
        for (auto& node : tree.nodes) {
            std::istringstream row(r.line());
            std::string threshold;
            row >> node.feature >> threshold >> node.left >> node.right >> node.counts[0] >> node.counts[1] >>
                node.counts[2];
            if (!row) throw ValidationError("model file: malformed tree node");
            node.threshold = io::parse_double(threshold);
            if (!node.is_leaf() && (node.left >= n_nodes || node.right >= n_nodes)) {
                throw ValidationError("model file: tree child index out of range");
            }
        }
        if (tree.nodes.empty()) throw ValidationError("model file: empty tree");
    }
    return m;
}

void save(const Model& model, const std::filesystem::path& path) { io::write_file(path, serialize(model)); }

Model load(const std::filesystem::path& path) { return deserialize(io::read_file(path)); }

}  // namespace revsent::models
