#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "triplesim/baselines.hpp"
#include "triplesim/digest.hpp"
#include "triplesim/errors.hpp"
#include "triplesim/eval.hpp"
#include "triplesim/manifest.hpp"
#include "triplesim/rdf.hpp"
#include "triplesim/similarity.hpp"
#include "triplesim/vectorizer.hpp"

namespace {

using namespace triplesim;

// Bad flag combinations and lookups; exits with status 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Tracks files written by one command so a failure can remove the
// partial output set.
class OutputSet {
public:
    void write(const std::string& path, std::string_view bytes) {
        std::ofstream out(path, std::ios::binary);
        if (out) out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error("cannot write file: " + path);
        written_.push_back(path);
    }

    void write_manifest(const RunManifest& manifest, const std::string& path) {
        triplesim::write_manifest(manifest, path);
        written_.push_back(path);
    }

    void discard() {
        for (const std::string& path : written_) std::remove(path.c_str());
        written_.clear();
    }

private:
    std::vector<std::string> written_;
};

MethodId parse_method(const std::string& name) {
    const std::optional<MethodId> method = method_from_name(name);
    if (!method) throw UsageError("unknown method: " + name);
    return *method;
}

std::vector<MethodId> parse_method_list(const std::string& csv) {
    std::vector<MethodId> methods;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) methods.push_back(parse_method(item));
    }
    if (methods.empty()) throw UsageError("no methods given: " + csv);
    return methods;
}

// Shared --data/--embeddings/--config plumbing plus the individual
// config flags. Defaults come from the config file, which comes from
// --config or else the TRIPLESIM_CONFIG environment variable; explicit
// flags win over the file.
struct CommonArgs {
    std::string data_path;
    std::string embeddings_path;
    std::string config_path;
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    bool clamp = true;
    std::string combine;
    std::string alignment;
    std::string numeric;

    CLI::Option* alpha_opt = nullptr;
    CLI::Option* beta_opt = nullptr;
    CLI::Option* gamma_opt = nullptr;
    CLI::Option* clamp_opt = nullptr;
    CLI::Option* combine_opt = nullptr;
    CLI::Option* alignment_opt = nullptr;
    CLI::Option* numeric_opt = nullptr;

    void attach(CLI::App& cmd, bool with_embeddings = true) {
        cmd.add_option("--data", data_path, "N-Triples input file")->required();
        if (with_embeddings)
            cmd.add_option("--embeddings", embeddings_path,
                           "word2vec text embeddings, optionally gzipped");
        cmd.add_option("--config", config_path, "JSON config file");
        alpha_opt = cmd.add_option("--alpha", alpha, "subject weight");
        beta_opt = cmd.add_option("--beta", beta, "predicate weight");
        gamma_opt = cmd.add_option("--gamma", gamma, "object weight");
        clamp_opt = cmd.add_option("--clamp-negative-cosine", clamp,
                                   "clamp negative cosines to 0 (default true)");
        combine_opt = cmd.add_option("--combine", combine, "literal|normalized");
        alignment_opt = cmd.add_option("--alignment", alignment, "predicate|best_match");
        numeric_opt = cmd.add_option("--numeric-normalization", numeric, "literal|range");
    }

    SimilarityConfig resolve(RunManifest& manifest) const {
        std::string path = config_path;
        if (path.empty()) {
            if (const char* env = std::getenv("TRIPLESIM_CONFIG")) path = env;
        }
        nlohmann::json j = nlohmann::json::object();
        if (!path.empty()) {
            const std::string text = read_file(path);
            manifest.input_digests[path] = sha256_hex(text);
            try {
                j = nlohmann::json::parse(text);
            } catch (const nlohmann::json::exception& e) {
                throw Error("config file " + path + ": " + e.what());
            }
        }
        if (alpha_opt->count()) j["alpha"] = alpha;
        if (beta_opt->count()) j["beta"] = beta;
        if (gamma_opt->count()) j["gamma"] = gamma;
        if (clamp_opt->count()) j["clamp_negative_cosine"] = clamp;
        if (combine_opt->count()) j["combine"] = combine;
        if (alignment_opt->count()) j["alignment"] = alignment;
        if (numeric_opt->count()) j["numeric_normalization"] = numeric;
        SimilarityConfig cfg = config_from_json(j);
        manifest.config = cfg;
        return cfg;
    }

    Dataset load_dataset(RunManifest& manifest) const {
        const std::string text = read_file(data_path);
        manifest.input_digests[data_path] = sha256_hex(text);
        return group_by_subject(parse_ntriples(text));
    }

    // Loads --embeddings when the method needs one; nullopt otherwise.
    std::optional<EmbeddingStore> load_embeddings(MethodId method, RunManifest& manifest) const {
        if (method == MethodId::Jaccard || method == MethodId::N2) return std::nullopt;
        if (embeddings_path.empty())
            throw UsageError("method " + method_name(method) + " requires --embeddings");
        const std::string bytes = read_file(embeddings_path);
        manifest.input_digests[embeddings_path] = sha256_hex(bytes);
        return load_word2vec_file(embeddings_path);
    }
};

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void print_score(double value) { std::printf("%.6f\n", value); }

nlohmann::json breakdown_json(MethodId method, double value, const Score* score) {
    nlohmann::json out{{"method", method_name(method)}, {"value", value}};
    if (score && score->graph) {
        const GraphBreakdown& g = *score->graph;
        out["qualitative_term"] = g.qualitative_term;
        out["quantitative_term"] = g.quantitative_term;
        out["qualitative_count"] = g.qualitative_count;
        out["quantitative_count"] = g.quantitative_count;
        out["matched_pairs"] = g.matched_pairs;
        out["unmatched_count"] = g.unmatched_count;
    }
    return out;
}

int run_sim(const CommonArgs& args, const std::string& id_a, const std::string& id_b,
            const std::string& method_name_arg, bool breakdown) {
    RunManifest manifest;
    manifest.command = "sim";
    const auto start = std::chrono::steady_clock::now();

    const MethodId method = parse_method(method_name_arg);
    const SimilarityConfig cfg = args.resolve(manifest);
    const Dataset data = args.load_dataset(manifest);
    const std::optional<EmbeddingStore> store = args.load_embeddings(method, manifest);

    const EntityGraph* a = data.find(id_a);
    if (!a) throw UnknownEntity(id_a);
    const EntityGraph* b = data.find(id_b);
    if (!b) throw UnknownEntity(id_b);

    std::optional<PredicateRanges> ranges;
    if (cfg.numeric_normalization == NumericNormalization::RangeScaled)
        ranges = collect_predicate_ranges(data);
    const PredicateRanges* scale = ranges ? &*ranges : nullptr;

    double value = 0.0;
    std::optional<Score> score;
    switch (method) {
        case MethodId::Jaccard:
            value = jaccard(*a, *b);
            break;
        case MethodId::N2: {
            std::vector<WordList> corpus;
            corpus.reserve(data.size());
            for (const EntityGraph& g : data.entities()) corpus.push_back(entity_document(g));
            const TfidfModel tfidf = build_tfidf(corpus);
            score = sim_graphs(*a, *b, tfidf, cfg, scale);
            value = score->value;
            break;
        }
        case MethodId::SiLi:
            score = sili(*a, *b, *store, cfg, scale);
            value = score->value;
            break;
        case MethodId::N1:
            score = sim_graphs(*a, *b, *store, cfg, scale);
            value = score->value;
            break;
    }

    print_score(value);
    if (breakdown)
        std::cout << breakdown_json(method, value, score ? &*score : nullptr).dump(2) << '\n';
    manifest.runtime_seconds = elapsed_seconds(start);
    return 0;
}

int run_matrix(const CommonArgs& args, const std::string& method_name_arg,
               const std::string& out_prefix, unsigned threads) {
    RunManifest manifest;
    manifest.command = "matrix";
    const auto start = std::chrono::steady_clock::now();

    const MethodId method = parse_method(method_name_arg);
    const SimilarityConfig cfg = args.resolve(manifest);
    const Dataset data = args.load_dataset(manifest);
    const std::optional<EmbeddingStore> store = args.load_embeddings(method, manifest);

    std::cerr << "computing " << method_name(method) << " matrix over " << data.size()
              << " entities\n";
    const SimilarityMatrix matrix =
        pairwise_matrix(data, method, store ? &*store : nullptr, cfg, threads);

    OutputSet outputs;
    try {
        outputs.write(out_prefix + ".csv", export_matrix_csv(matrix));
        outputs.write(out_prefix + ".pgm", export_heatmap_pgm(matrix));
        manifest.runtime_seconds = elapsed_seconds(start);
        outputs.write_manifest(manifest, out_prefix + ".manifest.json");
    } catch (...) {
        outputs.discard();
        throw;
    }
    std::cerr << "wrote " << out_prefix << ".csv, .pgm, .manifest.json\n";
    return 0;
}

int run_eval_cmd(const CommonArgs& args, const std::string& methods_csv,
                 const std::string& out_dir, unsigned threads) {
    RunManifest manifest;
    manifest.command = "eval";
    const auto start = std::chrono::steady_clock::now();

    const std::vector<MethodId> methods = parse_method_list(methods_csv);
    const SimilarityConfig cfg = args.resolve(manifest);
    const Dataset data = args.load_dataset(manifest);

    bool needs_embeddings = false;
    for (MethodId m : methods)
        needs_embeddings = needs_embeddings || m == MethodId::N1 || m == MethodId::SiLi;
    std::optional<EmbeddingStore> store;
    if (needs_embeddings)
        store = args.load_embeddings(MethodId::N1, manifest);

    std::cerr << "evaluating " << methods_csv << " over " << data.size() << " entities\n";
    const EvalReport report = run_eval(data, methods, store ? &*store : nullptr, cfg, threads);

    std::filesystem::create_directories(out_dir);
    OutputSet outputs;
    try {
        for (const SimilarityMatrix& matrix : report.matrices) {
            const std::string base = out_dir + "/" + method_name(matrix.method);
            outputs.write(base + "_matrix.csv", export_matrix_csv(matrix));
            outputs.write(base + "_heatmap.pgm", export_heatmap_pgm(matrix));
            outputs.write(base + "_histogram.csv",
                          export_histogram_csv(report.histograms.at(matrix.method)));
            std::cerr << "method " << method_name(matrix.method) << " done\n";
        }
        outputs.write(out_dir + "/report.json", report_to_json(report).dump(2) + "\n");
        manifest.runtime_seconds = elapsed_seconds(start);
        outputs.write_manifest(manifest, out_dir + "/manifest.json");
    } catch (...) {
        outputs.discard();
        throw;
    }
    std::cerr << "wrote report to " << out_dir << "\n";
    return 0;
}

int run_rank(const CommonArgs& args, const std::string& query, std::size_t k,
             const std::string& method_name_arg, const std::string& out_path) {
    RunManifest manifest;
    manifest.command = "rank";
    const auto start = std::chrono::steady_clock::now();

    const MethodId method = parse_method(method_name_arg);
    const SimilarityConfig cfg = args.resolve(manifest);
    const Dataset data = args.load_dataset(manifest);
    const std::optional<EmbeddingStore> store = args.load_embeddings(method, manifest);

    const auto ranked = rank_top_k(data, query, k, method, store ? &*store : nullptr, cfg);

    std::string csv = "rank,id,score\n";
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", ranked[i].second);
        csv += std::to_string(i + 1) + "," + ranked[i].first + "," + buf + "\n";
    }

    if (out_path.empty()) {
        std::cout << csv;
        return 0;
    }
    OutputSet outputs;
    try {
        outputs.write(out_path, csv);
        manifest.runtime_seconds = elapsed_seconds(start);
        outputs.write_manifest(manifest, out_path + ".manifest.json");
    } catch (...) {
        outputs.discard();
        throw;
    }
    std::cerr << "wrote " << out_path << "\n";
    return 0;
}

int run_synth(std::size_t entities, std::uint64_t seed, const std::string& out_path,
              const std::string& embeddings_out, Eigen::Index dim) {
    RunManifest manifest;
    manifest.command = "synth";
    manifest.seed = seed;
    const auto start = std::chrono::steady_clock::now();

    const SynthResult synth = synth_dataset(entities, seed);
    std::vector<Triple> triples;
    for (const EntityGraph& g : synth.dataset.entities())
        triples.insert(triples.end(), g.triples().begin(), g.triples().end());

    OutputSet outputs;
    try {
        outputs.write(out_path, serialize_ntriples(std::move(triples)));
        if (!embeddings_out.empty()) {
            const EmbeddingStore store = generate_toy_embeddings(synth.lexicon, dim, seed);
            std::ostringstream text;
            save_word2vec_text(store, text);
            outputs.write(embeddings_out, text.str());
        }
        manifest.runtime_seconds = elapsed_seconds(start);
        outputs.write_manifest(manifest, out_path + ".manifest.json");
    } catch (...) {
        outputs.discard();
        throw;
    }
    std::cerr << "wrote " << entities << " entities to " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semantic similarity over RDF entity descriptions"};
    app.require_subcommand(1);

    CommonArgs sim_args;
    std::string sim_a, sim_b, sim_method;
    bool sim_breakdown = false;
    CLI::App* sim = app.add_subcommand("sim", "Score one entity pair");
    sim_args.attach(*sim);
    sim->add_option("--a", sim_a, "first entity IRI")->required();
    sim->add_option("--b", sim_b, "second entity IRI")->required();
    sim->add_option("--method", sim_method, "n1|n2|sili|jaccard")->required();
    sim->add_flag("--breakdown", sim_breakdown, "print per-component JSON");

    CommonArgs matrix_args;
    std::string matrix_method, matrix_prefix;
    unsigned matrix_threads = 1;
    CLI::App* matrix = app.add_subcommand("matrix", "Pairwise similarity matrix");
    matrix_args.attach(*matrix);
    matrix->add_option("--method", matrix_method, "n1|n2|sili|jaccard")->required();
    matrix->add_option("--out-prefix", matrix_prefix, "output path prefix")->required();
    matrix->add_option("--threads", matrix_threads, "worker threads")
        ->check(CLI::Range(1u, 256u));

    CommonArgs eval_args;
    std::string eval_methods, eval_out;
    unsigned eval_threads = 1;
    CLI::App* eval = app.add_subcommand("eval", "Multi-method evaluation report");
    eval_args.attach(*eval);
    eval->add_option("--methods", eval_methods, "comma-separated method list")->required();
    eval->add_option("--out-dir", eval_out, "output directory")->required();
    eval->add_option("--threads", eval_threads, "worker threads")->check(CLI::Range(1u, 256u));

    CommonArgs rank_args;
    std::string rank_query, rank_method, rank_out;
    std::size_t rank_k = 10;
    CLI::App* rank = app.add_subcommand("rank", "Top-k most similar entities");
    rank_args.attach(*rank);
    rank->add_option("--query", rank_query, "query entity IRI")->required();
    rank->add_option("--k", rank_k, "list length")->required();
    rank->add_option("--method", rank_method, "n1|n2|sili|jaccard")->required();
    rank->add_option("--out", rank_out, "write CSV here instead of standard output");

    std::size_t synth_entities = 0;
    std::uint64_t synth_seed = 0;
    std::string synth_out, synth_embeddings;
    Eigen::Index synth_dim = 50;
    CLI::App* synth = app.add_subcommand("synth", "Seeded synthetic vehicle dataset");
    synth->add_option("--entities", synth_entities, "entity count")->required();
    synth->add_option("--seed", synth_seed, "random seed")->required();
    synth->add_option("--out", synth_out, "output N-Triples path")->required();
    synth->add_option("--emit-embeddings", synth_embeddings, "also write toy embeddings here");
    synth->add_option("--dim", synth_dim, "toy embedding dimension")
        ->check(CLI::Range(Eigen::Index{1}, Eigen::Index{4096}));

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return run_sim(sim_args, sim_a, sim_b, sim_method, sim_breakdown);
        if (matrix->parsed())
            return run_matrix(matrix_args, matrix_method, matrix_prefix, matrix_threads);
        if (eval->parsed()) return run_eval_cmd(eval_args, eval_methods, eval_out, eval_threads);
        if (rank->parsed()) return run_rank(rank_args, rank_query, rank_k, rank_method, rank_out);
        if (synth->parsed())
            return run_synth(synth_entities, synth_seed, synth_out, synth_embeddings, synth_dim);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const triplesim::UnknownEntity& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\nrun with --help for usage\n";
        return 2;
    } catch (const triplesim::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
