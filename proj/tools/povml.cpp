// povml: config-driven poverty-classification pipelines over household
// survey data. Subcommands: profile, wrangle, train, evaluate, cv,
// importance. Exit codes: 0 success, 2 input/schema error, 3 pipeline error,
// 4 assertion failure (--expect-canonical).
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "povml/errors.hpp"
#include "povml/pipeline.hpp"
#include "povml/threading.hpp"

using namespace povml;
using nlohmann::json;

namespace {

struct CommonOptions {
    std::string config_path;
    std::string dataset;
    std::string out_dir = "povml_out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string model;
    int threads = 0;
    int pca_k = -1;  // -1: keep config; 0: disable; >0: enable with k
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool needs_config) {
    auto* config = cmd->add_option("--config", opts.config_path, "pipeline config JSON");
    if (needs_config) config->required();
    cmd->add_option("--dataset", opts.dataset, "dataset CSV (overrides config)");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "seed (overrides config)")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--model", opts.model, "model type: tree|forest|gbt|nb|knn");
    cmd->add_option("--threads", opts.threads, "worker threads (0 = all cores)");
    cmd->add_option("--pca", opts.pca_k, "PCA component count (0 disables)");
}

PipelineConfig resolve_config(const CommonOptions& opts) {
    PipelineConfig config = opts.config_path.empty()
                                ? PipelineConfig{}
                                : PipelineConfig::load(opts.config_path);
    if (!opts.dataset.empty()) config.dataset = opts.dataset;
    if (opts.seed_set) config.seed = opts.seed;
    if (!opts.model.empty()) {
        auto kind = model_kind_from_name(opts.model);
        if (!kind) throw InputError("unknown model type '" + opts.model + "'");
        config.model.kind = *kind;
    }
    if (opts.threads > 0) config.threads = opts.threads;
    if (opts.pca_k == 0) config.pca.enabled = false;
    if (opts.pca_k > 0) {
        config.pca.enabled = true;
        config.pca.k = static_cast<std::size_t>(opts.pca_k);
    }
    if (config.dataset.empty()) throw InputError("no dataset given (config or --dataset)");

    if (config.threads > 0) {
        set_thread_count(config.threads);
    } else if (const char* env = std::getenv("POVML_THREADS")) {
        set_thread_count(std::atoi(env));
    }
    return config;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory '" + dir + "': " + ec.message());
}

void write_audit(const std::string& dir, const std::vector<std::string>& lines) {
    std::string text;
    for (const auto& line : lines) text += line + "\n";
    write_text_file(dir + "/audit.log", text);
}

Schema load_schema(const std::string& path) {
    if (path.empty()) return Schema::canonical();
    std::ifstream in(path);
    if (!in) throw InputError("cannot open schema file '" + path + "'");
    json j;
    in >> j;
    return Schema::from_json(j);
}

int cmd_profile(const std::string& dataset, const std::string& schema_path,
                const std::string& out_file, bool expect_canonical) {
    const Schema schema = load_schema(schema_path);
    const RawTable table = load_csv(dataset, schema);
    const DatasetProfile prof = profile(table);
    const std::string text = prof.to_json().dump(2) + "\n";
    if (out_file.empty())
        std::cout << text;
    else
        write_text_file(out_file, text);

    if (expect_canonical) {
        bool ok = true;
        for (const auto& var : schema.variables()) {
            const std::size_t actual = prof.missing_by_column.at(var.name);
            if (actual != var.expected_missing) {
                std::cerr << "missing-count mismatch for " << var.name << ": expected "
                          << var.expected_missing << ", got " << actual << "\n";
                ok = false;
            }
        }
        if (!ok) return 4;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"poverty-status classification pipelines"};
    app.require_subcommand(1);

    // profile
    auto* profile_cmd = app.add_subcommand("profile", "load a dataset and print its profile");
    std::string profile_dataset, profile_schema, profile_out;
    bool expect_canonical = false;
    profile_cmd->add_option("dataset", profile_dataset, "dataset CSV")->required();
    profile_cmd->add_option("--schema", profile_schema, "schema JSON override");
    profile_cmd->add_option("--out", profile_out, "write the profile JSON here");
    profile_cmd->add_flag("--expect-canonical", expect_canonical,
                          "fail (exit 4) unless missing counts match the published table");

    // wrangle
    auto* wrangle_cmd = app.add_subcommand("wrangle", "clean a dataset and write features CSV");
    CommonOptions wrangle_opts;
    add_common(wrangle_cmd, wrangle_opts, false);

    // train
    auto* train_cmd = app.add_subcommand("train", "fit a model and write artifacts");
    CommonOptions train_opts;
    add_common(train_cmd, train_opts, true);

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "held-out evaluation, optional CV");
    CommonOptions eval_opts;
    std::size_t eval_cv = 0;
    add_common(eval_cmd, eval_opts, true);
    eval_cmd->add_option("--cv", eval_cv, "also run k-fold CV on the training split");

    // cv
    auto* cv_cmd = app.add_subcommand("cv", "k-fold cross-validation over the wrangled data");
    CommonOptions cv_opts;
    std::size_t cv_folds = 0;
    add_common(cv_cmd, cv_opts, true);
    cv_cmd->add_option("--folds", cv_folds, "fold count (default from config)");

    // importance
    auto* imp_cmd = app.add_subcommand("importance", "train and rank feature importances");
    CommonOptions imp_opts;
    add_common(imp_cmd, imp_opts, true);

    try {
        app.parse(argc, argv);

        if (profile_cmd->parsed())
            return cmd_profile(profile_dataset, profile_schema, profile_out, expect_canonical);

        if (wrangle_cmd->parsed()) {
            const PipelineConfig config = resolve_config(wrangle_opts);
            PreparedData data = prepare(config);
            ImputerState imputer = fit_imputer(data.structural.matrix, data.impute_columns);
            impute(data.structural.matrix, imputer);
            ensure_out_dir(wrangle_opts.out_dir);
            write_text_file(wrangle_opts.out_dir + "/features.csv",
                            features_csv(data.structural.matrix));
            write_text_file(wrangle_opts.out_dir + "/plan.json",
                            data.plan.to_json().dump(2) + "\n");
            write_audit(wrangle_opts.out_dir, data.audit);
            return 0;
        }

        if (train_cmd->parsed()) {
            const PipelineConfig config = resolve_config(train_opts);
            const TrainResult result = run_train(config);
            ensure_out_dir(train_opts.out_dir);
            write_text_file(train_opts.out_dir + "/model.json", result.model_json.dump() + "\n");
            json imputer = result.stages.imputer.to_json();
            imputer["pipeline_id"] = config.hash();
            write_text_file(train_opts.out_dir + "/imputer.json", imputer.dump() + "\n");
            json scaler = result.stages.scaler.to_json();
            scaler["pipeline_id"] = config.hash();
            write_text_file(train_opts.out_dir + "/scaler.json", scaler.dump() + "\n");
            if (result.stages.pca) {
                json pca = result.stages.pca->to_json();
                pca["pipeline_id"] = config.hash();
                write_text_file(train_opts.out_dir + "/pca.json", pca.dump() + "\n");
            }
            write_audit(train_opts.out_dir, result.audit);
            return 0;
        }

        if (eval_cmd->parsed()) {
            PipelineConfig config = resolve_config(eval_opts);
            if (eval_cv > 0) config.eval.cv_folds = eval_cv;
            const EvaluateResult result = run_evaluate(config, eval_cv > 0);
            ensure_out_dir(eval_opts.out_dir);
            write_text_file(eval_opts.out_dir + "/report.json",
                            result.report_json.dump(2) + "\n");
            write_text_file(eval_opts.out_dir + "/report.csv", result.report_csv);
            if (!result.importance_csv.empty())
                write_text_file(eval_opts.out_dir + "/importance.csv", result.importance_csv);
            if (!result.explained_variance_csv.empty())
                write_text_file(eval_opts.out_dir + "/explained_variance.csv",
                                result.explained_variance_csv);
            write_audit(eval_opts.out_dir, result.audit);
            return 0;
        }

        if (cv_cmd->parsed()) {
            PipelineConfig config = resolve_config(cv_opts);
            if (cv_folds > 0) config.eval.cv_folds = cv_folds;
            const PreparedData data = prepare(config);
            const CvResult cv = cross_validate(config, data.structural.matrix,
                                               config.eval.cv_folds, config.seed);
            json j;
            j["pipeline_id"] = config.hash();
            j["model"] = model_kind_name(config.model.kind);
            j["cv"] = cv_to_json(cv);
            ensure_out_dir(cv_opts.out_dir);
            write_text_file(cv_opts.out_dir + "/report.json", j.dump(2) + "\n");
            std::vector<std::string> audit = data.audit;
            audit.push_back("cv folds " + std::to_string(config.eval.cv_folds));
            write_audit(cv_opts.out_dir, audit);
            std::cout << j["cv"]["mean"].dump(2) << "\n";
            return 0;
        }

        if (imp_cmd->parsed()) {
            const PipelineConfig config = resolve_config(imp_opts);
            const EvaluateResult result = run_evaluate(config, false);
            if (result.importance_csv.empty())
                throw StageError("eval", "model '" +
                                             std::string(model_kind_name(config.model.kind)) +
                                             "' has no feature importances");
            ensure_out_dir(imp_opts.out_dir);
            write_text_file(imp_opts.out_dir + "/importance.csv", result.importance_csv);
            write_audit(imp_opts.out_dir, result.audit);
            std::cout << result.importance_csv;
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
