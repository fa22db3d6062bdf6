// yall: command-line front end for the plural-"you" corpus pipeline.
//
// Stages talk to each other only through files. Exit codes: 0 success,
// 1 usage or configuration error, 2 data error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "yall/yall.hpp"

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

// Relative inputs missing from the working directory are looked up under
// $YALL_DATA_DIR.
std::string resolve_input(const std::string& path) {
  if (fs::exists(path)) return path;
  const char* data_dir = std::getenv("YALL_DATA_DIR");
  if (data_dir != nullptr && fs::path(path).is_relative()) {
    const fs::path candidate = fs::path(data_dir) / path;
    if (fs::exists(candidate)) return candidate.string();
  }
  throw yall::ConfigError("input not found: " + path);
}

void check_output(const std::string& path) {
  const fs::path parent = fs::absolute(path).parent_path();
  if (!fs::is_directory(parent)) {
    throw yall::ConfigError("output directory does not exist: " + parent.string());
  }
}

// A dataset directory stands for one of its partition files.
std::string partition_file(const std::string& path, const char* partition) {
  const std::string resolved = resolve_input(path);
  if (fs::is_directory(resolved)) return (fs::path(resolved) / (std::string(partition) + ".jsonl")).string();
  return resolved;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw yall::ConfigError("cannot write " + path);
  out << text;
}

void write_or_print(const std::string& path, const yall::Json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_text(path, j.dump(2) + "\n");
  }
}

std::vector<yall::LabeledInstance> read_all(const std::vector<std::string>& paths) {
  std::vector<yall::LabeledInstance> out;
  for (const auto& p : paths) {
    auto part = yall::read_instances(resolve_input(p));
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

yall::PluralFormLexicon lexicon_from(const std::string& path) {
  return path.empty() ? yall::PluralFormLexicon::defaults()
                      : yall::PluralFormLexicon::load(resolve_input(path));
}

yall::SplitRatios parse_ratios(const std::string& s) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw yall::ConfigError("bad ratio '" + item + "'");
    }
  }
  if (v.size() != 3) throw yall::ConfigError("--ratios needs three comma-separated values");
  return {v[0], v[1], v[2]};
}

struct HyperparamFlags {
  yall::Hyperparams hp;

  void attach(CLI::App* cmd) {
    cmd->add_option("--window", hp.window, "Context window in tokens")->capture_default_str();
    cmd->add_option("--lr", hp.learning_rate, "Initial learning rate")->capture_default_str();
    cmd->add_option("--l2", hp.l2, "L2 regularization strength")->capture_default_str();
    cmd->add_option("--epochs", hp.epochs, "SGD epochs")->capture_default_str();
    cmd->add_option("--hash-bits", hp.hash_bits, "log2 of the feature hash space")
        ->capture_default_str()
        ->check(CLI::Range(1, 30));
    cmd->add_option("--seed", hp.seed, "Random seed")->capture_default_str();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distantly supervised corpora and classifiers for singular vs. plural \"you\""};
  app.require_subcommand(1);

  // extract-twitter
  std::string tw_in, tw_lexicon, tw_out, tw_stats;
  auto* extract_twitter = app.add_subcommand("extract-twitter", "Label tweets via informal plural forms");
  extract_twitter->add_option("--tweets", tw_in, "Tweets JSONL")->required();
  extract_twitter->add_option("--lexicon", tw_lexicon, "Plural-form lexicon JSON");
  extract_twitter->add_option("--out", tw_out, "Output instances JSONL")->required();
  extract_twitter->add_option("--stats", tw_stats, "Write extraction statistics JSON here");

  // extract-europarl
  std::string ep_en, ep_es, ep_out, ep_lexicon, ep_stats;
  bool quiet = false;
  auto* extract_europarl = app.add_subcommand("extract-europarl", "Label English \"you\" via Spanish alignment");
  extract_europarl->add_option("--en", ep_en, "English side, one sentence per line")->required();
  extract_europarl->add_option("--es", ep_es, "Spanish side, one sentence per line")->required();
  extract_europarl->add_option("--out", ep_out, "Output instances JSONL")->required();
  extract_europarl->add_option("--es-lexicon", ep_lexicon, "Spanish pronoun lexicon JSON");
  extract_europarl->add_option("--stats", ep_stats, "Write extraction statistics JSON here");
  extract_europarl->add_flag("--quiet", quiet, "No progress output");

  // build-dataset
  std::vector<std::string> bd_in;
  std::string bd_out, bd_ratios = "0.8,0.1,0.1", bd_tag;
  std::uint64_t bd_seed = kDefaultSeed;
  auto* build = app.add_subcommand("build-dataset", "Dedup, balance and split instances");
  build->add_option("--in", bd_in, "Instance JSONL files")->required();
  build->add_option("--out", bd_out, "Output dataset directory")->required();
  build->add_option("--seed", bd_seed, "Random seed")->capture_default_str();
  build->add_option("--ratios", bd_ratios, "train,dev,test")->capture_default_str();
  build->add_option("--domain-tag", bd_tag, "Tag recorded in the manifest");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Corpus analyses");
  analyze->require_subcommand(1);

  std::vector<std::string> hist_in;
  std::string hist_out, hist_svg, hist_lexicon;
  auto* histogram = analyze->add_subcommand("histogram", "Plural-form histogram");
  histogram->add_option("--in", hist_in, "Instance JSONL files")->required();
  histogram->add_option("--out", hist_out, "Histogram JSON (default: stdout)");
  histogram->add_option("--svg", hist_svg, "Bar chart SVG");
  histogram->add_option("--lexicon", hist_lexicon, "Plural-form lexicon JSON");

  std::vector<std::string> map_in;
  std::string map_out, map_svg, map_states, map_lexicon;
  auto* state_map = analyze->add_subcommand("state-map", "Preferred plural form per state");
  state_map->add_option("--in", map_in, "Instance JSONL files")->required();
  state_map->add_option("--out", map_out, "Table JSON (default: stdout)");
  state_map->add_option("--svg", map_svg, "Map SVG");
  state_map->add_option("--states", map_states, "State bounding-box JSON (default: built in)");
  state_map->add_option("--lexicon", map_lexicon, "Plural-form lexicon JSON");

  std::vector<std::string> sample_in;
  std::string sample_out, sample_label = "any";
  std::size_t sample_n = 100;
  std::uint64_t sample_seed = kDefaultSeed;
  auto* sample = analyze->add_subcommand("sample", "Draw instances for manual annotation");
  sample->add_option("--in", sample_in, "Instance JSONL files")->required();
  sample->add_option("--out", sample_out, "Annotation JSONL")->required();
  sample->add_option("--n", sample_n, "Sample size")->capture_default_str();
  sample->add_option("--label", sample_label, "singular, plural or any")
      ->capture_default_str()
      ->check(CLI::IsMember({"singular", "plural", "any"}));
  sample->add_option("--seed", sample_seed, "Random seed")->capture_default_str();

  std::string agree_in, agree_out;
  auto* agreement = analyze->add_subcommand("agreement", "Agreement rate of an annotated sample");
  agreement->add_option("--in", agree_in, "Annotated JSONL")->required();
  agreement->add_option("--out", agree_out, "Result JSON (default: stdout)");

  // train
  std::string train_in, train_out, train_domain;
  HyperparamFlags train_flags;
  auto* train = app.add_subcommand("train", "Train the hashed logistic-regression baseline");
  train->add_option("--train", train_in, "Instances JSONL or dataset directory")->required();
  train->add_option("--out", train_out, "Model JSON")->required();
  train->add_option("--domain", train_domain, "Training domain recorded in the model");
  train_flags.attach(train);

  // evaluate
  std::string eval_model, eval_test, eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "Accuracy of a model on a test set");
  evaluate->add_option("--model", eval_model, "Model JSON")->required();
  evaluate->add_option("--test", eval_test, "Instances JSONL or dataset directory")->required();
  evaluate->add_option("--out", eval_out, "Result JSON (default: stdout)");

  // eval-matrix
  std::string em_europarl, em_twitter, em_out, em_table;
  HyperparamFlags em_flags;
  auto* matrix = app.add_subcommand("eval-matrix", "Train on each corpus and on both, test on each");
  matrix->add_option("--europarl", em_europarl, "Europarl dataset directory")->required();
  matrix->add_option("--twitter", em_twitter, "Twitter dataset directory")->required();
  matrix->add_option("--out", em_out, "Report JSON (default: stdout)");
  matrix->add_option("--table", em_table, "Plain-text table (default: stderr)");
  em_flags.attach(matrix);

  // gen-fixture
  std::string gf_out;
  std::uint64_t gf_seed = kDefaultSeed;
  std::size_t gf_n = 50;
  std::size_t gf_planted = 0;
  double gf_noise = 0.1;
  auto* gen = app.add_subcommand("gen-fixture", "Write a synthetic corpus with ground truth");
  gen->add_option("--out", gf_out, "Output directory")->required();
  gen->add_option("--seed", gf_seed, "Random seed")->capture_default_str();
  gen->add_option("--n", gf_n, "Tweets per cue group; bitext gets 20x as many pairs")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  gen->add_option("--planted", gf_planted, "Also write planted-cue instances, this many per class");
  gen->add_option("--noise", gf_noise, "Cue noise for planted instances")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*extract_twitter) {
      const auto in = resolve_input(tw_in);
      check_output(tw_out);
      if (!tw_stats.empty()) check_output(tw_stats);
      const auto lexicon = lexicon_from(tw_lexicon);
      const auto tweets = yall::read_utterances(in);
      const auto result = yall::extract_twitter(tweets, lexicon);
      std::vector<yall::LabeledInstance> all = result.plural;
      all.insert(all.end(), result.singular.begin(), result.singular.end());
      yall::write_instances(tw_out, all);
      const auto& s = result.stats;
      yall::Json stats{{"tweets", s.tweets},         {"qualifying_users", s.qualifying_users},
                       {"plural", s.plural},         {"singular", s.singular},
                       {"unqualified_author", s.unqualified_author},
                       {"mixed", s.mixed},           {"multiple_targets", s.multiple_targets},
                       {"no_target", s.no_target}};
      std::cerr << stats.dump() << '\n';
      if (!tw_stats.empty()) write_text(tw_stats, stats.dump(2) + "\n");
    } else if (*extract_europarl) {
      const auto en = resolve_input(ep_en);
      const auto es = resolve_input(ep_es);
      check_output(ep_out);
      if (!ep_stats.empty()) check_output(ep_stats);
      const auto lexicon = ep_lexicon.empty() ? yall::EsPronounLexicon::defaults()
                                              : yall::EsPronounLexicon::load(resolve_input(ep_lexicon));
      yall::EuroparlExtractor extractor(lexicon);
      const auto load = yall::for_each_parallel(en, es, [&](yall::ParallelPair&& p) {
        extractor.add(p);
        if (!quiet && p.line_number % 250000 == 0) std::cerr << "... " << p.line_number << " lines\n";
      });
      auto result = extractor.take();
      std::vector<yall::LabeledInstance> all = std::move(result.plural);
      all.insert(all.end(), result.singular.begin(), result.singular.end());
      yall::write_instances(ep_out, all);
      const auto& s = result.stats;
      yall::Json stats{{"lines", load.lines},
                       {"blank_lines", load.blank},
                       {"pairs", s.pairs},
                       {"plural", s.plural},
                       {"singular", s.singular},
                       {"no_spanish_pronoun", s.no_spanish_pronoun},
                       {"mixed_spanish", s.mixed_spanish},
                       {"multiple_spanish", s.multiple_spanish},
                       {"english_you_mismatch", s.english_you_mismatch}};
      std::cerr << stats.dump() << '\n';
      if (!ep_stats.empty()) write_text(ep_stats, stats.dump(2) + "\n");
    } else if (*build) {
      const auto ratios = parse_ratios(bd_ratios);
      const auto instances = yall::dedup(read_all(bd_in));
      std::vector<yall::LabeledInstance> plural, singular;
      for (const auto& i : instances) (i.label == yall::Label::Plural ? plural : singular).push_back(i);
      std::string tag = bd_tag;
      if (tag.empty() && !instances.empty()) tag = std::string(yall::to_string(instances.front().domain));
      const auto balanced = yall::balance(std::move(plural), std::move(singular), bd_seed);
      const auto bundle = yall::stratified_split(balanced, ratios, bd_seed, tag);
      yall::serialize(bundle, bd_out);
      std::cerr << "train " << bundle.train.size() << ", dev " << bundle.dev.size() << ", test "
                << bundle.test.size() << '\n';
    } else if (*analyze) {
      if (*histogram) {
        if (!hist_out.empty()) check_output(hist_out);
        if (!hist_svg.empty()) check_output(hist_svg);
        const auto h = yall::form_histogram(read_all(hist_in), lexicon_from(hist_lexicon));
        write_or_print(hist_out, yall::to_json(h));
        if (!hist_svg.empty()) write_text(hist_svg, yall::histogram_svg(h));
      } else if (*state_map) {
        if (!map_out.empty()) check_output(map_out);
        if (!map_svg.empty()) check_output(map_svg);
        const auto index = map_states.empty() ? yall::GeoStateIndex::us_states()
                                              : yall::GeoStateIndex::load(resolve_input(map_states));
        const auto prefs = yall::state_preference_map(read_all(map_in), index, lexicon_from(map_lexicon));
        write_or_print(map_out, yall::to_json(prefs));
        if (!map_svg.empty()) write_text(map_svg, yall::state_map_svg(prefs, index));
      } else if (*sample) {
        check_output(sample_out);
        std::optional<yall::Label> filter;
        if (sample_label != "any") filter = yall::parse_label(sample_label);
        const auto s = yall::sample_for_annotation(read_all(sample_in), sample_n, filter, sample_seed);
        yall::write_annotation_file(sample_out, s);
      } else if (*agreement) {
        if (!agree_out.empty()) check_output(agree_out);
        const auto s = yall::read_annotation_file(resolve_input(agree_in));
        const double rate = yall::compute_agreement(s);
        std::map<std::string, std::size_t> counts{{"agree", 0}, {"disagree", 0}, {"ambiguous", 0}};
        for (auto h : s.human_labels) ++counts[std::string(yall::to_string(h))];
        yall::Json j = yall::Json::object();
        j["n"] = s.instances.size();
        for (const auto& [k, v] : counts) j[k] = v;
        j["agreement_rate"] = rate;
        write_or_print(agree_out, j);
      }
    } else if (*train) {
      const auto in = partition_file(train_in, "train");
      check_output(train_out);
      const auto instances = yall::read_instances(in);
      std::string domain = train_domain;
      if (domain.empty() && !instances.empty()) domain = std::string(yall::to_string(instances.front().domain));
      const auto model = yall::train(instances, train_flags.hp, domain);
      yall::save_model(model, train_out);
      std::cerr << "epoch loss:";
      for (double l : model.epoch_loss) std::cerr << ' ' << l;
      std::cerr << '\n';
    } else if (*evaluate) {
      const auto model = yall::load_model(resolve_input(eval_model));
      const auto test_path = partition_file(eval_test, "test");
      if (!eval_out.empty()) check_output(eval_out);
      const auto test = yall::read_instances(test_path);
      yall::Json j = yall::Json::object();
      j["model_domain"] = model.training_domain;
      j["n"] = test.size();
      j["accuracy"] = yall::evaluate(model, test);
      write_or_print(eval_out, j);
    } else if (*matrix) {
      const auto ep_dir = resolve_input(em_europarl);
      const auto tw_dir = resolve_input(em_twitter);
      if (!em_out.empty()) check_output(em_out);
      if (!em_table.empty()) check_output(em_table);
      std::map<std::string, yall::DatasetBundle> bundles;
      bundles["europarl"] = yall::deserialize(ep_dir);
      bundles["twitter"] = yall::deserialize(tw_dir);
      const auto m = yall::eval_matrix(bundles, em_flags.hp);
      write_or_print(em_out, yall::to_json(m, em_flags.hp));
      const auto table = yall::format_table(m);
      if (em_table.empty()) {
        std::cerr << table;
      } else {
        write_text(em_table, table);
      }
    } else if (*gen) {
      fs::create_directories(gf_out);
      const auto fixture = yall::generate_fixture(gf_seed, gf_n);
      const fs::path dir(gf_out);
      {
        std::ofstream tweets(dir / "tweets.jsonl", std::ios::binary | std::ios::trunc);
        for (const auto& t : fixture.twitter.tweets) tweets << yall::to_json(t).dump() << '\n';
        std::ofstream en(dir / "bitext.en", std::ios::binary | std::ios::trunc);
        std::ofstream es(dir / "bitext.es", std::ios::binary | std::ios::trunc);
        for (const auto& p : fixture.bitext.pairs) {
          en << p.english << '\n';
          es << p.spanish << '\n';
        }
        std::ofstream truth(dir / "truth.jsonl", std::ios::binary | std::ios::trunc);
        for (const auto& t : fixture.twitter.truth) truth << yall::to_json(t).dump() << '\n';
        for (const auto& t : fixture.bitext.truth) truth << yall::to_json(t).dump() << '\n';
      }
      if (gf_planted > 0) {
        const yall::PlantedOptions opt{gf_planted, gf_noise, gf_seed};
        yall::write_instances((dir / "planted-twitter.jsonl").string(),
                              yall::generate_planted_instances(yall::Domain::Twitter, opt));
        yall::write_instances((dir / "planted-europarl.jsonl").string(),
                              yall::generate_planted_instances(yall::Domain::Europarl, opt));
      }
    }
  } catch (const yall::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const yall::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
