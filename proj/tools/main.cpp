#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "setconv/pipeline.hpp"

namespace {

// Exit codes: 0 success, 2 usage, 3 data, 4 compatibility, 1 internal.
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitCompat = 4;

void add_train_flags(CLI::App* cmd, setconv::TrainOptions& opt) {
  cmd->add_option("--data", opt.data_path, "training CSV file")
      ->required()
      ->envname("SETCONV_DATA");
  cmd->add_option("--label-col", opt.label_column, "label column name")
      ->envname("SETCONV_LABEL_COL");
  cmd->add_option("--mode", opt.mode, "binary | multiclass")
      ->check(CLI::IsMember({"binary", "multiclass"}))
      ->envname("SETCONV_MODE");
  cmd->add_option("--support-size", opt.config.support_size,
                  "episode support set size")
      ->envname("SETCONV_SUPPORT_SIZE");
  cmd->add_option("--d-out", opt.config.output_dim, "embedding width")
      ->envname("SETCONV_D_OUT");
  cmd->add_option("--hidden", opt.config.hidden_dim, "kernel mlp hidden width")
      ->envname("SETCONV_HIDDEN");
  cmd->add_option("--iterations", opt.config.iterations, "training iterations")
      ->envname("SETCONV_ITERATIONS");
  cmd->add_option("--lr", opt.config.learning_rate, "Adam learning rate")
      ->envname("SETCONV_LR");
  cmd->add_option("--seed", opt.config.seed, "run seed")->envname("SETCONV_SEED");
  cmd->add_option("--s-post", opt.s_post, "post-training subset size")
      ->envname("SETCONV_S_POST");
  cmd->add_option("--anchor-cap", opt.config.anchor_cap,
                  "max minority samples used for the anchor (0 = all)")
      ->envname("SETCONV_ANCHOR_CAP");
  cmd->add_option("--split-ratio", opt.split_ratio, "train fraction of the data")
      ->envname("SETCONV_SPLIT_RATIO");
  cmd->add_option("--model-out", opt.model_out, "model file to write")
      ->required()
      ->envname("SETCONV_MODEL_OUT");
  cmd->add_option("--loss-out", opt.loss_out,
                  "loss log CSV (default: <model-out>.loss.csv)")
      ->envname("SETCONV_LOSS_OUT");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SetConv imbalanced-classification pipeline"};
  app.require_subcommand(1);

  setconv::SynthOptions synth_opt;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset CSV");
  std::size_t synth_classes = 2;
  CLI::Option* classes_opt =
      synth->add_option("--classes", synth_classes, "number of classes");
  synth->add_option("--counts", synth_opt.counts, "per-class sample counts")
      ->required()
      ->delimiter(',');
  synth->add_option("--dim", synth_opt.dim, "feature dimension");
  synth->add_option("--sep", synth_opt.separation,
                    "distance between any two class means");
  synth->add_option("--std", synth_opt.stddev, "per-class standard deviation");
  synth->add_option("--seed", synth_opt.seed, "generator seed")
      ->envname("SETCONV_SEED");
  synth->add_option("--out", synth_opt.out_path, "output CSV path")->required();

  setconv::TrainOptions train_opt;
  CLI::App* train = app.add_subcommand("train", "train a model on a labeled CSV");
  add_train_flags(train, train_opt);

  setconv::EvalOptions eval_opt;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a model on labeled data");
  eval->add_option("--model", eval_opt.model_path, "model file")
      ->required()
      ->envname("SETCONV_MODEL");
  eval->add_option("--data", eval_opt.data_path, "labeled CSV file")
      ->required()
      ->envname("SETCONV_DATA");
  eval->add_option("--label-col", eval_opt.label_column,
                   "label column (default: the one recorded in the model)")
      ->envname("SETCONV_LABEL_COL");
  eval->add_option("--subset", eval_opt.subset,
                   "rows to evaluate: test | train | all")
      ->check(CLI::IsMember({"test", "train", "all"}))
      ->envname("SETCONV_SUBSET");
  eval->add_option("--report-out", eval_opt.report_out, "report CSV to write")
      ->envname("SETCONV_REPORT_OUT");

  setconv::PredictOptions predict_opt;
  CLI::App* predict =
      app.add_subcommand("predict", "label an unlabeled feature CSV");
  predict->add_option("--model", predict_opt.model_path, "model file")
      ->required()
      ->envname("SETCONV_MODEL");
  predict->add_option("--data", predict_opt.data_path, "feature CSV file")
      ->required()
      ->envname("SETCONV_DATA");
  predict->add_option("--label-col", predict_opt.label_column,
                      "column to drop from the input, if present")
      ->envname("SETCONV_LABEL_COL");
  predict->add_option("--out", predict_opt.out_path, "predictions CSV to write")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (synth->parsed()) {
      if (classes_opt->count() > 0 && synth_opt.counts.size() != synth_classes)
        throw setconv::InvalidArgument("--counts must list one count per class");
      const setconv::SynthSummary summary = setconv::run_synth(synth_opt);
      std::size_t total = 0;
      for (std::size_t c = 0; c < summary.counts.size(); ++c) {
        std::printf("class %zu: %zu samples\n", c, summary.counts[c]);
        total += summary.counts[c];
      }
      std::printf("total %zu rows, IR %.2f -> %s\n", total, summary.imbalance_ratio,
                  synth_opt.out_path.c_str());
    } else if (train->parsed()) {
      const setconv::TrainSummary summary = setconv::run_train(train_opt);
      std::printf("train rows %zu, held-out rows %zu\n", summary.train_rows,
                  summary.test_rows);
      std::printf("final training loss %.6f\n", summary.final_loss);
      std::printf("model -> %s\n", train_opt.model_out.c_str());
    } else if (eval->parsed()) {
      const auto rows = setconv::run_eval(eval_opt);
      std::cout << setconv::report_to_table(rows);
      if (!eval_opt.report_out.empty())
        std::printf("report -> %s\n", eval_opt.report_out.c_str());
    } else if (predict->parsed()) {
      const std::size_t n = setconv::run_predict(predict_opt);
      std::printf("%zu predictions -> %s\n", n, predict_opt.out_path.c_str());
    }
  } catch (const setconv::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const setconv::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompat;
  } catch (const setconv::VersionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompat;
  } catch (const setconv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
