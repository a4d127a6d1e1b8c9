// Command-line front end: dataset generation, adversarial augmentation,
// signed-graph training, grid sweeps, and evaluation, with reproducible JSON
// run manifests. Every run can be replayed from its manifest alone.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "signet/run_io.hpp"
#include "signet/signet.hpp"

namespace {

using namespace signet;

// ---------------------------------------------------------------------------
// manifest plumbing

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

Json manifest_skeleton(const std::string& command) {
    Json m;
    m["artifact"] = Json{{"name", kArtifactName}, {"version", kArtifactVersion}};
    m["command"] = command;
    return m;
}

void finish_manifest(Json m, const Json& config, const std::vector<std::string>& inputs,
                     const std::vector<std::string>& outputs, double wall_clock,
                     const std::string& path) {
    m["config"] = config;
    Json in = Json::array(), out = Json::array();
    for (const std::string& p : inputs) in.push_back(file_entry(p));
    for (const std::string& p : outputs) out.push_back(file_entry(p));
    m["inputs"] = in;
    m["outputs"] = out;
    m["wall_clock_s"] = wall_clock;
    write_json(m, path);
}

std::string manifest_path_for(const std::string& anchor) {
    return anchor + ".manifest.json";
}

std::string into_dir(const std::string& path, const std::string& dir) {
    if (dir.empty()) return path;
    return (std::filesystem::path(dir) / std::filesystem::path(path).filename()).string();
}

// ---------------------------------------------------------------------------
// gen-data

struct GenDataArgs {
    std::string kind = "two-annuli";
    std::size_t n = 100;
    double inner = 1.0;
    double outer = 1.3;
    double thickness = 0.2;
    double noise_sd = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

Json to_json(const GenDataArgs& a) {
    return Json{{"kind", a.kind},         {"n", a.n},
                {"inner", a.inner},       {"outer", a.outer},
                {"thickness", a.thickness}, {"noise_sd", a.noise_sd},
                {"seed", a.seed},         {"out", a.out}};
}

GenDataArgs gen_data_from_json(const Json& j) {
    GenDataArgs a;
    a.kind = j.at("kind");
    a.n = j.at("n");
    a.inner = j.at("inner");
    a.outer = j.at("outer");
    a.thickness = j.at("thickness");
    a.noise_sd = j.at("noise_sd");
    a.seed = j.at("seed");
    a.out = j.at("out");
    return a;
}

void run_gen_data(const GenDataArgs& a) {
    Stopwatch watch;
    if (a.kind != "two-annuli")
        throw std::runtime_error("unknown dataset kind: " + a.kind);
    Dataset ds = generate_two_annuli(a.n, a.inner, a.outer, a.thickness, a.noise_sd,
                                     a.seed);
    save_csv(ds, a.out);
    finish_manifest(manifest_skeleton("gen-data"), to_json(a), {}, {a.out},
                    watch.seconds(), manifest_path_for(a.out));
}

// ---------------------------------------------------------------------------
// split

struct SplitArgs {
    std::string input;
    std::string label_column = "label";
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
    std::string out_train;
    std::string out_test;
};

Json to_json(const SplitArgs& a) {
    return Json{{"input", a.input},
                {"label_column", a.label_column},
                {"train_fraction", a.train_fraction},
                {"seed", a.seed},
                {"out_train", a.out_train},
                {"out_test", a.out_test}};
}

SplitArgs split_from_json(const Json& j) {
    SplitArgs a;
    a.input = j.at("input");
    a.label_column = j.at("label_column");
    a.train_fraction = j.at("train_fraction");
    a.seed = j.at("seed");
    a.out_train = j.at("out_train");
    a.out_test = j.at("out_test");
    return a;
}

void run_split(const SplitArgs& a) {
    Stopwatch watch;
    Dataset ds = load_csv(a.input, a.label_column);
    auto [train, test] = split(ds, {a.train_fraction, a.seed});
    save_csv(train, a.out_train, a.label_column);
    save_csv(test, a.out_test, a.label_column);
    finish_manifest(manifest_skeleton("split"), to_json(a), {a.input},
                    {a.out_train, a.out_test}, watch.seconds(),
                    manifest_path_for(a.out_train));
}

// ---------------------------------------------------------------------------
// augment

struct AugmentArgs {
    std::string input;
    std::string label_column = "label";
    double gamma = 1e-2;
    std::size_t budget = 200;
    double pos_frac = 0.20;
    double neg_frac = 0.20;
    double r1 = 0.0;  // 0 means auto (derived from rho)
    double r2 = 0.0;
    double r3 = 0.0;
    double seed_noise_sd = 0.05;
    std::string distance = "angular-cosine";
    bool normalize = true;
    std::uint64_t seed = 0;
    std::string out;
    std::string scaler_out;
};

Json to_json(const AugmentArgs& a) {
    return Json{{"input", a.input},
                {"label_column", a.label_column},
                {"gamma", a.gamma},
                {"budget", a.budget},
                {"pos_frac", a.pos_frac},
                {"neg_frac", a.neg_frac},
                {"r1", a.r1},
                {"r2", a.r2},
                {"r3", a.r3},
                {"seed_noise_sd", a.seed_noise_sd},
                {"distance", a.distance},
                {"normalize", a.normalize},
                {"seed", a.seed},
                {"out", a.out},
                {"scaler_out", a.scaler_out}};
}

AugmentArgs augment_from_json(const Json& j) {
    AugmentArgs a;
    a.input = j.at("input");
    a.label_column = j.at("label_column");
    a.gamma = j.at("gamma");
    a.budget = j.at("budget");
    a.pos_frac = j.at("pos_frac");
    a.neg_frac = j.at("neg_frac");
    a.r1 = j.at("r1");
    a.r2 = j.at("r2");
    a.r3 = j.at("r3");
    a.seed_noise_sd = j.at("seed_noise_sd");
    a.distance = j.at("distance");
    a.normalize = j.at("normalize");
    a.seed = j.at("seed");
    a.out = j.at("out");
    a.scaler_out = j.at("scaler_out");
    return a;
}

AugmentConfig augment_config(const AugmentArgs& a) {
    AugmentConfig cfg;
    cfg.gamma = a.gamma;
    cfg.budget_T = a.budget;
    cfg.positive_fraction = a.pos_frac;
    cfg.negative_fraction = a.neg_frac;
    if (a.r1 > 0.0) cfg.r1 = a.r1;
    if (a.r2 > 0.0) cfg.r2 = a.r2;
    if (a.r3 > 0.0) cfg.r3 = a.r3;
    cfg.seed_noise_sd = a.seed_noise_sd;
    cfg.distance = parse_distance_kind(a.distance);
    cfg.rng_seed = a.seed;
    return cfg;
}

void run_augment(AugmentArgs a) {
    Stopwatch watch;
    if (a.scaler_out.empty()) a.scaler_out = a.out + ".scaler.json";
    Dataset ds = load_csv(a.input, a.label_column);

    std::vector<std::string> outputs{a.out};
    Dataset working = ds;
    if (a.normalize) {
        auto [normed, scaler] = normalize_features(ds);
        working = std::move(normed);
        save_scaler(scaler, a.scaler_out);
        outputs.push_back(a.scaler_out);
    }

    ExpandedDataset expanded = expand_dataset(working, augment_config(a), DfoConfig{});
    save_expanded_csv(expanded, a.out, a.label_column);
    finish_manifest(manifest_skeleton("augment"), to_json(a), {a.input}, outputs,
                    watch.seconds(), manifest_path_for(a.out));
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
    std::string input;
    std::string label_column = "label";
    std::string test;    // optional raw CSV
    std::string scaler;  // optional scaler applied to the test data
    std::size_t n_plus = 1;
    std::size_t n_minus = 4;
    std::string distance = "angular-cosine";
    double lambda = 1.0;
    double margin = 1.0;
    bool raw_graph_sum = false;
    std::vector<std::size_t> hidden{64, 32};
    double dropout = 0.5;
    double weight_decay = 1e-4;
    std::size_t epochs = 300;
    std::size_t batch_edges = 64;
    bool full_batch = false;
    double learning_rate = 1e-2;
    std::string optimizer = "sgd-momentum";
    std::size_t eval_every = 10;
    std::uint64_t seed = 0;
    std::string out_model;
    std::string out_report;
    std::string out_summary;
    std::string out_graph;  // optional edge list (+ ".meta.csv" sidecar)
};

Json to_json(const TrainArgs& a) {
    return Json{{"input", a.input},
                {"label_column", a.label_column},
                {"test", a.test},
                {"scaler", a.scaler},
                {"n_plus", a.n_plus},
                {"n_minus", a.n_minus},
                {"distance", a.distance},
                {"lambda", a.lambda},
                {"margin", a.margin},
                {"raw_graph_sum", a.raw_graph_sum},
                {"hidden", a.hidden},
                {"dropout", a.dropout},
                {"weight_decay", a.weight_decay},
                {"epochs", a.epochs},
                {"batch_edges", a.batch_edges},
                {"full_batch", a.full_batch},
                {"learning_rate", a.learning_rate},
                {"optimizer", a.optimizer},
                {"eval_every", a.eval_every},
                {"seed", a.seed},
                {"out_model", a.out_model},
                {"out_report", a.out_report},
                {"out_summary", a.out_summary},
                {"out_graph", a.out_graph}};
}

TrainArgs train_from_json(const Json& j) {
    TrainArgs a;
    a.input = j.at("input");
    a.label_column = j.at("label_column");
    a.test = j.at("test");
    a.scaler = j.at("scaler");
    a.n_plus = j.at("n_plus");
    a.n_minus = j.at("n_minus");
    a.distance = j.at("distance");
    a.lambda = j.at("lambda");
    a.margin = j.at("margin");
    a.raw_graph_sum = j.at("raw_graph_sum");
    a.hidden = j.at("hidden").get<std::vector<std::size_t>>();
    a.dropout = j.at("dropout");
    a.weight_decay = j.at("weight_decay");
    a.epochs = j.at("epochs");
    a.batch_edges = j.at("batch_edges");
    a.full_batch = j.at("full_batch");
    a.learning_rate = j.at("learning_rate");
    a.optimizer = j.at("optimizer");
    a.eval_every = j.at("eval_every");
    a.seed = j.at("seed");
    a.out_model = j.at("out_model");
    a.out_report = j.at("out_report");
    a.out_summary = j.at("out_summary");
    a.out_graph = j.at("out_graph");
    return a;
}

Optimizer parse_optimizer(const std::string& name) {
    if (name == "sgd") return Optimizer::Sgd;
    if (name == "sgd-momentum") return Optimizer::SgdMomentum;
    throw std::runtime_error("unknown optimizer: " + name);
}

void run_train(TrainArgs a) {
    Stopwatch watch;
    if (a.out_report.empty()) a.out_report = a.out_model + ".report.csv";
    if (a.out_summary.empty()) a.out_summary = a.out_model + ".summary.json";
    if (a.lambda > 0.0 && a.n_plus == 0 && a.n_minus == 0)
        throw std::runtime_error(
            "vacuous regularizer: lambda > 0 requires n_plus or n_minus > 0");

    ExpandedDataset expanded = load_expanded_csv(a.input, a.label_column);
    std::vector<std::string> inputs{a.input};

    Dataset test_data;
    const Dataset* test = nullptr;
    if (!a.test.empty()) {
        test_data = load_csv(a.test, a.label_column);
        inputs.push_back(a.test);
        if (!a.scaler.empty()) {
            test_data = load_scaler(a.scaler).apply(test_data);
            inputs.push_back(a.scaler);
        }
        test = &test_data;
    }

    bool use_graph = a.lambda > 0.0;
    SignedGraph graph;
    std::vector<std::string> outputs{a.out_model, a.out_report, a.out_summary};
    if (use_graph) {
        GraphConfig gcfg{a.n_plus, a.n_minus, parse_distance_kind(a.distance)};
        graph = build_graph(expanded, gcfg);
        if (!a.out_graph.empty()) {
            save_edge_list(graph, a.out_graph);
            save_node_meta(graph, a.out_graph + ".meta.csv");
            outputs.push_back(a.out_graph);
            outputs.push_back(a.out_graph + ".meta.csv");
        }
    }

    MlpSpec spec;
    spec.input_dim = expanded.nodes().front().size();
    spec.hidden_dims = a.hidden;
    spec.class_count = static_cast<std::size_t>(expanded.class_count());
    spec.dropout_rate = a.dropout;
    spec.weight_decay = a.weight_decay;

    LossConfig loss_cfg;
    loss_cfg.lambda = a.lambda;
    loss_cfg.margin = a.margin;
    loss_cfg.embedding_distance = parse_distance_kind(a.distance);
    loss_cfg.normalize_graph_term = !a.raw_graph_sum;

    TrainConfig cfg;
    cfg.epochs = a.epochs;
    cfg.batch_edges = a.batch_edges;
    cfg.full_batch = a.full_batch;
    cfg.learning_rate = a.learning_rate;
    cfg.optimizer = parse_optimizer(a.optimizer);
    cfg.rng_seed = a.seed;
    cfg.eval_every = a.eval_every;

    FitResult result = fit(expanded, use_graph ? &graph : nullptr, spec, loss_cfg, cfg,
                           test);
    save_params(spec, result.params, a.out_model);
    save_report_csv(result.report, a.out_report);

    Json summary;
    summary["final"] = report_summary(result.report);
    summary["regularizer"] = use_graph ? "enabled" : "disabled";
    summary["config"] = to_json(a);
    summary["seeds"] = Json{{"seed", a.seed}};
    write_json(summary, a.out_summary);

    Json manifest = manifest_skeleton("train");
    manifest["regularizer"] = use_graph ? "enabled" : "disabled";
    finish_manifest(std::move(manifest), to_json(a), inputs, outputs, watch.seconds(),
                    manifest_path_for(a.out_model));
}

// ---------------------------------------------------------------------------
// grid

struct GridArgs {
    std::string input;
    std::string label_column = "label";
    double train_fraction = 0.8;
    std::vector<std::size_t> n_plus_list{0, 1};
    std::vector<std::size_t> n_minus_list{0, 4};
    std::vector<double> lambda_list{0.0, 1.0};
    std::size_t seeds = 3;
    std::uint64_t seed = 0;
    // augmentation knobs
    double gamma = 1e-2;
    std::size_t budget = 200;
    double pos_frac = 0.20;
    double neg_frac = 0.20;
    std::string distance = "angular-cosine";
    // training knobs
    std::vector<std::size_t> hidden{64, 32};
    double dropout = 0.5;
    double weight_decay = 1e-4;
    std::size_t epochs = 300;
    std::size_t batch_edges = 64;
    bool full_batch = false;
    double learning_rate = 1e-2;
    std::string optimizer = "sgd-momentum";
    double margin = 1.0;
    std::string out;
};

Json to_json(const GridArgs& a) {
    return Json{{"input", a.input},
                {"label_column", a.label_column},
                {"train_fraction", a.train_fraction},
                {"n_plus_list", a.n_plus_list},
                {"n_minus_list", a.n_minus_list},
                {"lambda_list", a.lambda_list},
                {"seeds", a.seeds},
                {"seed", a.seed},
                {"gamma", a.gamma},
                {"budget", a.budget},
                {"pos_frac", a.pos_frac},
                {"neg_frac", a.neg_frac},
                {"distance", a.distance},
                {"hidden", a.hidden},
                {"dropout", a.dropout},
                {"weight_decay", a.weight_decay},
                {"epochs", a.epochs},
                {"batch_edges", a.batch_edges},
                {"full_batch", a.full_batch},
                {"learning_rate", a.learning_rate},
                {"optimizer", a.optimizer},
                {"margin", a.margin},
                {"out", a.out}};
}

GridArgs grid_from_json(const Json& j) {
    GridArgs a;
    a.input = j.at("input");
    a.label_column = j.at("label_column");
    a.train_fraction = j.at("train_fraction");
    a.n_plus_list = j.at("n_plus_list").get<std::vector<std::size_t>>();
    a.n_minus_list = j.at("n_minus_list").get<std::vector<std::size_t>>();
    a.lambda_list = j.at("lambda_list").get<std::vector<double>>();
    a.seeds = j.at("seeds");
    a.seed = j.at("seed");
    a.gamma = j.at("gamma");
    a.budget = j.at("budget");
    a.pos_frac = j.at("pos_frac");
    a.neg_frac = j.at("neg_frac");
    a.distance = j.at("distance");
    a.hidden = j.at("hidden").get<std::vector<std::size_t>>();
    a.dropout = j.at("dropout");
    a.weight_decay = j.at("weight_decay");
    a.epochs = j.at("epochs");
    a.batch_edges = j.at("batch_edges");
    a.full_batch = j.at("full_batch");
    a.learning_rate = j.at("learning_rate");
    a.optimizer = j.at("optimizer");
    a.margin = j.at("margin");
    a.out = j.at("out");
    return a;
}

void run_grid(const GridArgs& a) {
    Stopwatch watch;
    if (a.seeds == 0) throw std::runtime_error("grid: need at least one seed");
    Dataset ds = load_csv(a.input, a.label_column);

    // Replicates share their split and augmentation across configurations; the
    // graph and regularizer settings are what the sweep varies.
    struct Replicate {
        ExpandedDataset expanded;
        Dataset test;
    };
    std::vector<Replicate> replicates;
    for (std::size_t s = 0; s < a.seeds; ++s) {
        auto [train, test] = split(ds, {a.train_fraction, mix_seed(a.seed, 101, s)});
        auto [normed, scaler] = normalize_features(train);
        AugmentConfig acfg;
        acfg.gamma = a.gamma;
        acfg.budget_T = a.budget;
        acfg.positive_fraction = a.pos_frac;
        acfg.negative_fraction = a.neg_frac;
        acfg.distance = parse_distance_kind(a.distance);
        acfg.rng_seed = mix_seed(a.seed, 202, s);
        replicates.push_back(
            {expand_dataset(normed, acfg, DfoConfig{}), scaler.apply(test)});
    }

    std::ofstream out(a.out);
    if (!out) throw std::runtime_error("cannot write file: " + a.out);
    out << "n_plus,n_minus,lambda,seed,accuracy,auc\n";
    for (std::size_t np : a.n_plus_list) {
        for (std::size_t nm : a.n_minus_list) {
            for (double lambda : a.lambda_list) {
                for (std::size_t s = 0; s < a.seeds; ++s) {
                    const Replicate& rep = replicates[s];
                    GraphConfig gcfg{np, nm, parse_distance_kind(a.distance)};
                    SignedGraph graph = build_graph(rep.expanded, gcfg);

                    MlpSpec spec;
                    spec.input_dim = rep.test.dim();
                    spec.hidden_dims = a.hidden;
                    spec.class_count = static_cast<std::size_t>(ds.class_count);
                    spec.dropout_rate = a.dropout;
                    spec.weight_decay = a.weight_decay;

                    LossConfig loss_cfg;
                    loss_cfg.lambda = lambda;
                    loss_cfg.margin = a.margin;
                    loss_cfg.embedding_distance = parse_distance_kind(a.distance);

                    TrainConfig cfg;
                    cfg.epochs = a.epochs;
                    cfg.batch_edges = a.batch_edges;
                    cfg.full_batch = a.full_batch;
                    cfg.learning_rate = a.learning_rate;
                    cfg.optimizer = parse_optimizer(a.optimizer);
                    cfg.rng_seed = mix_seed(a.seed, 303, s);
                    cfg.eval_every = a.epochs;  // final row only

                    FitResult result =
                        fit(rep.expanded, &graph, spec, loss_cfg, cfg, nullptr);
                    auto [acc, auc] = evaluate(spec, result.params, rep.test);
                    out << np << "," << nm << "," << format_double(lambda) << "," << s
                        << "," << format_double(acc) << ","
                        << (auc ? format_double(*auc) : "") << "\n";
                }
            }
        }
    }
    out.close();
    finish_manifest(manifest_skeleton("grid"), to_json(a), {a.input}, {a.out},
                    watch.seconds(), manifest_path_for(a.out));
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
    std::string model;
    std::string data;
    std::string label_column = "label";
    std::string scaler;
    std::string out_json;
};

Json to_json(const EvalArgs& a) {
    return Json{{"model", a.model},
                {"data", a.data},
                {"label_column", a.label_column},
                {"scaler", a.scaler},
                {"out_json", a.out_json}};
}

EvalArgs eval_from_json(const Json& j) {
    EvalArgs a;
    a.model = j.at("model");
    a.data = j.at("data");
    a.label_column = j.at("label_column");
    a.scaler = j.at("scaler");
    a.out_json = j.at("out_json");
    return a;
}

void run_eval(const EvalArgs& a) {
    Stopwatch watch;
    auto [spec, params] = load_params(a.model);
    Dataset ds = load_csv(a.data, a.label_column);
    std::vector<std::string> inputs{a.model, a.data};
    if (!a.scaler.empty()) {
        ds = load_scaler(a.scaler).apply(ds);
        inputs.push_back(a.scaler);
    }
    if (ds.dim() != spec.input_dim)
        throw std::runtime_error("dimension mismatch: model expects " +
                                 std::to_string(spec.input_dim) + " features, data has " +
                                 std::to_string(ds.dim()));

    auto [acc, auc] = evaluate(spec, params, ds);
    std::printf("accuracy %s\n", format_double(acc).c_str());
    std::printf("auc %s\n", auc ? format_double(*auc).c_str() : "n/a");

    Json j;
    j["accuracy"] = acc;
    j["auc"] = auc ? Json(*auc) : Json();
    write_json(j, a.out_json);
    finish_manifest(manifest_skeleton("eval"), to_json(a), inputs, {a.out_json},
                    watch.seconds(), manifest_path_for(a.out_json));
}

// ---------------------------------------------------------------------------
// replay

void run_replay(const std::string& manifest_path, const std::string& out_dir) {
    Json m = read_json(manifest_path);
    for (const Json& entry : m.at("inputs")) {
        std::string path = entry.at("path");
        if (file_hash_hex(path) != entry.at("fnv1a64").get<std::string>())
            throw std::runtime_error("input content changed since the original run: " +
                                     path);
    }
    std::string command = m.at("command");
    const Json& config = m.at("config");
    if (command == "gen-data") {
        GenDataArgs a = gen_data_from_json(config);
        a.out = into_dir(a.out, out_dir);
        run_gen_data(a);
    } else if (command == "split") {
        SplitArgs a = split_from_json(config);
        a.out_train = into_dir(a.out_train, out_dir);
        a.out_test = into_dir(a.out_test, out_dir);
        run_split(a);
    } else if (command == "augment") {
        AugmentArgs a = augment_from_json(config);
        a.out = into_dir(a.out, out_dir);
        a.scaler_out = into_dir(a.scaler_out, out_dir);
        run_augment(a);
    } else if (command == "train") {
        TrainArgs a = train_from_json(config);
        a.out_model = into_dir(a.out_model, out_dir);
        a.out_report = into_dir(a.out_report, out_dir);
        a.out_summary = into_dir(a.out_summary, out_dir);
        if (!a.out_graph.empty()) a.out_graph = into_dir(a.out_graph, out_dir);
        run_train(a);
    } else if (command == "grid") {
        GridArgs a = grid_from_json(config);
        a.out = into_dir(a.out, out_dir);
        run_grid(a);
    } else if (command == "eval") {
        EvalArgs a = eval_from_json(config);
        a.out_json = into_dir(a.out_json, out_dir);
        run_eval(a);
    } else {
        throw std::runtime_error("manifest has unknown command: " + command);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adversarial augmentation + signed-graph regularized training"};
    app.require_subcommand(1);

    GenDataArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen-data", "generate a synthetic dataset");
    gen_cmd->add_option("--kind", gen.kind, "dataset kind (two-annuli)");
    gen_cmd->add_option("--n", gen.n, "points per class")->required();
    gen_cmd->add_option("--inner", gen.inner, "inner band base radius");
    gen_cmd->add_option("--outer", gen.outer, "outer band base radius");
    gen_cmd->add_option("--thickness", gen.thickness, "band thickness");
    gen_cmd->add_option("--noise-sd", gen.noise_sd, "gaussian coordinate noise");
    gen_cmd->add_option("--seed", gen.seed, "rng seed (required for reproducibility)")
        ->required();
    gen_cmd->add_option("--out", gen.out, "output CSV")->required();

    SplitArgs spl;
    CLI::App* split_cmd = app.add_subcommand("split", "stratified train/test split");
    split_cmd->add_option("--input", spl.input, "input CSV")->required();
    split_cmd->add_option("--label-column", spl.label_column, "label column name");
    split_cmd->add_option("--train-fraction", spl.train_fraction, "train fraction");
    split_cmd->add_option("--seed", spl.seed, "rng seed")->required();
    split_cmd->add_option("--out-train", spl.out_train, "train CSV")->required();
    split_cmd->add_option("--out-test", spl.out_test, "test CSV")->required();

    AugmentArgs aug;
    CLI::App* aug_cmd =
        app.add_subcommand("augment", "generate adversarial positive/negative neighbors");
    aug_cmd->add_option("--input", aug.input, "training CSV")->required();
    aug_cmd->add_option("--label-column", aug.label_column, "label column name");
    aug_cmd->add_option("--gamma", aug.gamma, "distance-hinge weight");
    aug_cmd->add_option("--budget", aug.budget, "objective evaluations per neighbor");
    aug_cmd->add_option("--pos-frac", aug.pos_frac, "positive neighbors per class");
    aug_cmd->add_option("--neg-frac", aug.neg_frac, "negative neighbors per class");
    aug_cmd->add_option("--r1", aug.r1, "positive spacing radius (0 = auto)");
    aug_cmd->add_option("--r2", aug.r2, "negative spacing radius (0 = auto)");
    aug_cmd->add_option("--r3", aug.r3, "negative offset radius (0 = auto)");
    aug_cmd->add_option("--seed-noise-sd", aug.seed_noise_sd,
                        "bootstrap noise as a fraction of feature sd");
    aug_cmd->add_option("--distance", aug.distance, "angular-cosine or euclidean");
    aug_cmd->add_flag("--normalize,!--no-normalize", aug.normalize,
                      "z-score features before augmenting (default on)");
    aug_cmd->add_option("--seed", aug.seed, "rng seed")->required();
    aug_cmd->add_option("--out", aug.out, "expanded CSV")->required();
    aug_cmd->add_option("--scaler-out", aug.scaler_out,
                        "scaler JSON (default <out>.scaler.json)");

    TrainArgs tr;
    CLI::App* train_cmd =
        app.add_subcommand("train", "train the classifier with the signed-graph term");
    train_cmd->add_option("--input", tr.input, "expanded CSV")->required();
    train_cmd->add_option("--label-column", tr.label_column, "label column name");
    train_cmd->add_option("--test", tr.test, "held-out CSV for evaluation");
    train_cmd->add_option("--scaler", tr.scaler, "scaler JSON applied to the test data");
    train_cmd->add_option("--n-plus", tr.n_plus, "positive edges per node");
    train_cmd->add_option("--n-minus", tr.n_minus, "negative edges per node");
    train_cmd->add_option("--distance", tr.distance, "angular-cosine or euclidean");
    train_cmd->add_option("--lambda", tr.lambda, "regularizer weight");
    train_cmd->add_option("--margin", tr.margin, "negative-edge margin");
    train_cmd->add_flag("--raw-graph-sum", tr.raw_graph_sum,
                        "use the raw edge sum instead of the edge-count mean");
    train_cmd->add_option("--hidden", tr.hidden, "hidden layer widths")->delimiter(',');
    train_cmd->add_option("--dropout", tr.dropout, "dropout rate");
    train_cmd->add_option("--weight-decay", tr.weight_decay, "L2 weight decay");
    train_cmd->add_option("--epochs", tr.epochs, "training epochs");
    train_cmd->add_option("--batch-edges", tr.batch_edges, "batch size per step");
    train_cmd->add_flag("--full-batch", tr.full_batch, "one full-batch step per epoch");
    train_cmd->add_option("--lr", tr.learning_rate, "learning rate");
    train_cmd->add_option("--optimizer", tr.optimizer, "sgd or sgd-momentum");
    train_cmd->add_option("--eval-every", tr.eval_every, "epochs between report rows");
    train_cmd->add_option("--seed", tr.seed, "rng seed")->required();
    train_cmd->add_option("--out-model", tr.out_model, "model file")->required();
    train_cmd->add_option("--out-report", tr.out_report,
                          "report CSV (default <model>.report.csv)");
    train_cmd->add_option("--out-summary", tr.out_summary,
                          "summary JSON (default <model>.summary.json)");
    train_cmd->add_option("--out-graph", tr.out_graph, "edge-list file (optional)");

    GridArgs gr;
    CLI::App* grid_cmd =
        app.add_subcommand("grid", "sweep graph and regularizer settings over seeds");
    grid_cmd->add_option("--input", gr.input, "raw dataset CSV")->required();
    grid_cmd->add_option("--label-column", gr.label_column, "label column name");
    grid_cmd->add_option("--train-fraction", gr.train_fraction, "train fraction");
    grid_cmd->add_option("--n-plus-list", gr.n_plus_list, "n_plus values")
        ->delimiter(',');
    grid_cmd->add_option("--n-minus-list", gr.n_minus_list, "n_minus values")
        ->delimiter(',');
    grid_cmd->add_option("--lambda-list", gr.lambda_list, "lambda values")
        ->delimiter(',');
    grid_cmd->add_option("--seeds", gr.seeds, "replicates per configuration");
    grid_cmd->add_option("--seed", gr.seed, "base rng seed")->required();
    grid_cmd->add_option("--gamma", gr.gamma, "distance-hinge weight");
    grid_cmd->add_option("--budget", gr.budget, "objective evaluations per neighbor");
    grid_cmd->add_option("--pos-frac", gr.pos_frac, "positive neighbors per class");
    grid_cmd->add_option("--neg-frac", gr.neg_frac, "negative neighbors per class");
    grid_cmd->add_option("--distance", gr.distance, "angular-cosine or euclidean");
    grid_cmd->add_option("--hidden", gr.hidden, "hidden layer widths")->delimiter(',');
    grid_cmd->add_option("--dropout", gr.dropout, "dropout rate");
    grid_cmd->add_option("--weight-decay", gr.weight_decay, "L2 weight decay");
    grid_cmd->add_option("--epochs", gr.epochs, "training epochs");
    grid_cmd->add_option("--batch-edges", gr.batch_edges, "batch size per step");
    grid_cmd->add_flag("--full-batch", gr.full_batch, "one full-batch step per epoch");
    grid_cmd->add_option("--lr", gr.learning_rate, "learning rate");
    grid_cmd->add_option("--optimizer", gr.optimizer, "sgd or sgd-momentum");
    grid_cmd->add_option("--margin", gr.margin, "negative-edge margin");
    grid_cmd->add_option("--out", gr.out, "long-format results CSV")->required();

    EvalArgs ev;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a saved model");
    eval_cmd->add_option("--model", ev.model, "model file")->required();
    eval_cmd->add_option("--data", ev.data, "dataset CSV")->required();
    eval_cmd->add_option("--label-column", ev.label_column, "label column name");
    eval_cmd->add_option("--scaler", ev.scaler, "scaler JSON applied to the data");
    eval_cmd->add_option("--out-json", ev.out_json, "metrics JSON")->required();

    std::string replay_manifest, replay_dir;
    CLI::App* replay_cmd = app.add_subcommand("replay", "re-run a manifest");
    replay_cmd->add_option("--manifest", replay_manifest, "manifest JSON")->required();
    replay_cmd->add_option("--out-dir", replay_dir,
                           "redirect outputs into this directory");

    try {
        app.parse(argc, argv);
        if (gen_cmd->parsed()) run_gen_data(gen);
        else if (split_cmd->parsed()) run_split(spl);
        else if (aug_cmd->parsed()) run_augment(aug);
        else if (train_cmd->parsed()) run_train(tr);
        else if (grid_cmd->parsed()) run_grid(gr);
        else if (eval_cmd->parsed()) run_eval(ev);
        else if (replay_cmd->parsed()) run_replay(replay_manifest, replay_dir);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
