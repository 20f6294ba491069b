/**
 * @file experiments.cpp
 */
#include "semcom/eval/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "semcom/eval/csv.hpp"
#include "semcom/eval/plot.hpp"

namespace semcom::eval {

namespace fs = std::filesystem;

ExperimentContext load_context(const ExperimentConfig& cfg) {
  ExperimentContext ctx;
  ctx.data = load_webnlg_dataset(cfg.dataset.dir);
  ctx.vocab = Vocabulary::build(ctx.data.all_graphs());
  ctx.embedder = std::make_unique<CachedEmbedder>(
      make_embedder(cfg.dataset.embedder), cfg.dataset.cache);
  return ctx;
}

std::vector<const KnowledgeGraph*> select_graphs(
    const std::vector<KnowledgeGraph>& graphs, int max_n) {
  std::vector<const KnowledgeGraph*> out;
  const std::size_t n = max_n > 0
                            ? std::min(graphs.size(), static_cast<std::size_t>(max_n))
                            : graphs.size();
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(&graphs[i]);
  return out;
}

const std::vector<KnowledgeGraph>& split_by_name(const DatasetSplit& data,
                                                 const std::string& name) {
  if (name == "train") return data.train;
  if (name == "validation") return data.validation;
  if (name == "test") return data.test;
  throw ConfigError("unknown split name: " + name);
}

namespace {

void ensure_run_dir(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.run_dir);
  cfg.save(cfg.run_dir + "/config.json");
}

train::EpochMetrics train_system(train::SemanticSystem& system,
                                 const Vocabulary& vocab, CachedEmbedder& embedder,
                                 const std::vector<const KnowledgeGraph*>& graphs,
                                 const train::TrainConfig& tcfg,
                                 const std::string& metrics_csv,
                                 const std::string& tag) {
  train::Trainer trainer(system, vocab, embedder, tcfg);
  std::ofstream log(metrics_csv, std::ios::trunc);
  if (!log) throw std::runtime_error("cannot open " + metrics_csv);
  log << train::epoch_metrics_header() << '\n';
  train::EpochMetrics m;
  for (int e = 0; e < tcfg.epochs; ++e) {
    m = trainer.run_epoch(graphs, e);
    log << train::epoch_metrics_row(m) << '\n';
    log.flush();
    std::cout << "[" << tag << "] epoch " << (e + 1) << "/" << tcfg.epochs
              << " ce_nodes=" << m.ce_nodes << " ce_rel=" << m.ce_relations
              << " mi=" << m.mi << " node_acc=" << m.node_acc << " f1=" << m.f1
              << std::endl;
  }
  return m;
}

std::string variant_scheme(encoders::EncoderVariant v) {
  return v == encoders::EncoderVariant::llm_gnn ? "semantic_gnn" : "semantic_ffn";
}

}  // namespace

TrainRunResult run_training(const ExperimentConfig& cfg) {
  ensure_run_dir(cfg);
  ExperimentContext ctx = load_context(cfg);
  ctx.vocab.save_manifest(cfg.run_dir + "/vocab.tsv");

  train::SemanticSystem system(cfg.system_config(), ctx.vocab);
  const auto train_graphs = select_graphs(ctx.data.train, cfg.dataset.max_train_graphs);

  TrainRunResult r;
  r.metrics_csv = cfg.run_dir + "/metrics.csv";
  r.final_metrics = train_system(system, ctx.vocab, *ctx.embedder, train_graphs,
                                 cfg.train, r.metrics_csv, "train");
  r.checkpoint_path = cfg.run_dir + "/model.ckpt";
  train::save_checkpoint(r.checkpoint_path, system, cfg.to_json(), ctx.vocab.digest());
  if (!cfg.dataset.cache.empty()) ctx.embedder->save_cache();
  return r;
}

EvalRunResult run_evaluation(const ExperimentConfig& cfg,
                             const std::string& checkpoint_path) {
  ensure_run_dir(cfg);
  ExperimentContext ctx = load_context(cfg);
  train::SemanticSystem system(cfg.system_config(), ctx.vocab);
  train::load_checkpoint(checkpoint_path, system, ctx.vocab.digest());

  const auto graphs = select_graphs(split_by_name(ctx.data, cfg.eval.split),
                                    cfg.dataset.max_eval_graphs);
  EvalRunResult r;
  r.metrics = train::evaluate_graphs(system, ctx.vocab, *ctx.embedder, graphs,
                                     cfg.eval.batch_size, cfg.eval.draw_seed);
  r.csv_path = cfg.run_dir + "/eval.csv";
  CsvWriter csv(r.csv_path, {"split", "snr_db", "noiseless", "node_acc", "macro_f1",
                             "micro_f1"});
  csv.row({cfg.eval.split, csv_double(cfg.channel.snr_db),
           cfg.channel.noiseless ? "1" : "0", csv_double(r.metrics.node_acc),
           csv_double(r.metrics.macro_f1), csv_double(r.metrics.micro_f1)});
  return r;
}

double Fig2Result::node_acc(const std::string& variant, int d_z) const {
  for (const Fig2Cell& c : cells)
    if (c.variant == variant && c.d_z == d_z) return c.node_acc;
  throw std::invalid_argument("fig2: no cell for " + variant + " at d_z=" +
                              std::to_string(d_z));
}

Fig2Result run_fig2(const ExperimentConfig& cfg, const std::vector<int>& dz_list) {
  if (dz_list.empty()) throw ConfigError("fig2: empty d_z list");
  ensure_run_dir(cfg);

  ExperimentConfig base = cfg;
  base.channel.noiseless = true;  // both training and evaluation

  ExperimentContext ctx = load_context(base);
  const auto train_graphs = select_graphs(ctx.data.train, base.dataset.max_train_graphs);
  const auto eval_graphs = select_graphs(split_by_name(ctx.data, base.eval.split),
                                         base.dataset.max_eval_graphs);

  // Closed vocabulary over the graphs this experiment actually touches.
  std::vector<const KnowledgeGraph*> scope = train_graphs;
  scope.insert(scope.end(), eval_graphs.begin(), eval_graphs.end());
  Vocabulary vocab = Vocabulary::build(scope);

  Fig2Result result;
  result.csv_path = base.run_dir + "/fig2.csv";
  CsvWriter csv(result.csv_path, {"d_z", "variant", "node_acc", "macro_f1"});

  for (int d_z : dz_list) {
    for (encoders::EncoderVariant variant :
         {encoders::EncoderVariant::llm_gnn, encoders::EncoderVariant::llm_ffn}) {
      ExperimentConfig run = base;
      run.encoder.d_z = d_z;
      run.encoder.variant = variant;
      const std::string tag =
          "fig2 " + encoders::variant_name(variant) + " d_z=" + std::to_string(d_z);
      train::SemanticSystem system(run.system_config(), vocab);
      train_system(system, vocab, *ctx.embedder, train_graphs, run.train,
                   run.run_dir + "/fig2_train_" + encoders::variant_name(variant) +
                       "_dz" + std::to_string(d_z) + ".csv",
                   tag);
      train::EvalResult ev =
          train::evaluate_graphs(system, vocab, *ctx.embedder, eval_graphs,
                                 run.eval.batch_size, run.eval.draw_seed);
      Fig2Cell cell{encoders::variant_name(variant), d_z, ev.node_acc, ev.macro_f1};
      result.cells.push_back(cell);
      csv.row({std::to_string(d_z), cell.variant, csv_double(cell.node_acc),
               csv_double(cell.macro_f1)});
      std::cout << "[" << tag << "] eval node_acc=" << ev.node_acc
                << " macro_f1=" << ev.macro_f1 << std::endl;
    }
  }

  std::vector<int> sorted_dz = dz_list;
  std::sort(sorted_dz.begin(), sorted_dz.end());
  std::vector<Series> series;
  for (const std::string& variant : {std::string("llm_gnn"), std::string("llm_ffn")}) {
    Series s;
    s.label = variant;
    for (int d : sorted_dz) {
      s.x.push_back(d);
      s.y.push_back(result.node_acc(variant, d));
    }
    series.push_back(std::move(s));
  }
  write_svg_plot(base.run_dir + "/fig2.svg", "Node accuracy vs embedding size",
                 "d_z", "node accuracy", series);
  return result;
}

double snr_at_fraction_of_max(const std::vector<double>& snr,
                              const std::vector<double>& f1, double fraction) {
  if (snr.size() != f1.size() || snr.empty())
    throw std::invalid_argument("snr_at_fraction_of_max: malformed inputs");
  const double mx = *std::max_element(f1.begin(), f1.end());
  if (mx <= 0.0) return snr.back();
  const double thr = fraction * mx;
  for (std::size_t i = 0; i < snr.size(); ++i) {
    if (f1[i] >= thr) {
      if (i == 0) return snr[0];
      const double x0 = snr[i - 1], y0 = f1[i - 1];
      const double x1 = snr[i], y1 = f1[i];
      if (y1 == y0) return x1;
      return x0 + (thr - y0) * (x1 - x0) / (y1 - y0);
    }
  }
  return snr.back();
}

Fig3Result run_fig3(const ExperimentConfig& cfg, const std::vector<double>& snr_grid) {
  if (snr_grid.size() < 2) throw ConfigError("fig3: need an SNR grid");
  if (!std::is_sorted(snr_grid.begin(), snr_grid.end()))
    throw ConfigError("fig3: SNR grid must be ascending");
  ensure_run_dir(cfg);

  ExperimentContext ctx = load_context(cfg);
  const auto train_graphs = select_graphs(ctx.data.train, cfg.dataset.max_train_graphs);
  const auto eval_graphs = select_graphs(split_by_name(ctx.data, cfg.eval.split),
                                         cfg.dataset.max_eval_graphs);

  Fig3Result result;
  result.csv_path = cfg.run_dir + "/fig3.csv";
  CsvWriter csv(result.csv_path, {"snr_db", "scheme", "macro_f1", "micro_f1"});
  std::map<std::string, Series> curves;

  // Semantic systems, trained once at the reference SNR then swept.
  for (encoders::EncoderVariant variant :
       {encoders::EncoderVariant::llm_gnn, encoders::EncoderVariant::llm_ffn}) {
    ExperimentConfig run = cfg;
    run.encoder.variant = variant;
    const std::string scheme = variant_scheme(variant);
    train::SemanticSystem system(run.system_config(), ctx.vocab);
    train_system(system, ctx.vocab, *ctx.embedder, train_graphs, run.train,
                 run.run_dir + "/fig3_train_" + scheme + ".csv", "fig3 " + scheme);

    std::vector<double> f1s;
    for (double snr : snr_grid) {
      channel::ChannelConfig ch = run.channel;
      ch.snr_db = snr;
      ch.noiseless = false;
      system.set_channel(ch);
      train::EvalResult ev =
          train::evaluate_graphs(system, ctx.vocab, *ctx.embedder, eval_graphs,
                                 run.eval.batch_size, run.eval.draw_seed);
      result.points.push_back({snr, scheme, ev.macro_f1, ev.micro_f1});
      f1s.push_back(ev.macro_f1);
      std::cout << "[fig3 " << scheme << "] snr=" << snr
                << " macro_f1=" << ev.macro_f1 << std::endl;
    }
    result.snr_at_90pct[scheme] =
        snr_at_fraction_of_max(snr_grid, f1s, 0.9);
    curves[scheme] = Series{scheme, snr_grid, f1s};
  }

  // Classical baselines: shared Huffman codebook from the training split.
  const baselines::HuffmanCode code = baselines::HuffmanCode::build(
      baselines::build_codebook_corpus(select_graphs(ctx.data.train, 0)));
  for (baselines::SourceCoder coder :
       {baselines::SourceCoder::huffman, baselines::SourceCoder::sixbit}) {
    const std::string scheme =
        coder == baselines::SourceCoder::huffman ? "huffman" : "sixbit";
    std::vector<double> f1s;
    for (double snr : snr_grid) {
      std::vector<F1Report> reports;
      for (const KnowledgeGraph* g : eval_graphs) {
        baselines::BaselineRun run = baselines::classical_pipeline_run(
            *g, coder, &code, snr, false, cfg.eval.draw_seed);
        reports.push_back(triple_f1(run.triples, graph_to_triples(*g)));
      }
      const F1Summary s = summarize_f1(reports);
      result.points.push_back({snr, scheme, s.macro_f1, s.micro_f1});
      f1s.push_back(s.macro_f1);
      std::cout << "[fig3 " << scheme << "] snr=" << snr << " macro_f1=" << s.macro_f1
                << std::endl;
    }
    result.snr_at_90pct[scheme] = snr_at_fraction_of_max(snr_grid, f1s, 0.9);
    curves[scheme] = Series{scheme, snr_grid, f1s};
  }

  for (const Fig3Point& p : result.points)
    csv.row({csv_double(p.snr_db), p.scheme, csv_double(p.macro_f1),
             csv_double(p.micro_f1)});

  std::vector<Series> series;
  for (auto& [_, s] : curves) series.push_back(s);
  write_svg_plot(cfg.run_dir + "/fig3.svg", "Triple F1 vs SNR", "SNR (dB)",
                 "macro F1", series);
  return result;
}

Fig4Result run_fig4(const ExperimentConfig& cfg) {
  ensure_run_dir(cfg);
  ExperimentContext ctx = load_context(cfg);
  const auto eval_graphs = select_graphs(ctx.data.test, cfg.dataset.max_eval_graphs);
  if (eval_graphs.empty()) throw ConfigError("fig4: empty test split");

  const baselines::HuffmanCode code = baselines::HuffmanCode::build(
      baselines::build_codebook_corpus(select_graphs(ctx.data.train, 0)));
  static const baselines::SixBitCode sixbit;

  struct Accum {
    double semantic = 0.0, huffman = 0.0, six = 0.0;
    int n = 0;
  };
  std::map<int, Accum> buckets;
  Fig4Result result;

  for (const KnowledgeGraph* g : eval_graphs) {
    const int nodes = g->num_nodes();
    const double sem =
        semantic_bits(Scheme::semantic_gnn, nodes, cfg.channel.k,
                      cfg.eval.bits_per_symbol)
            .bits_per_graph;
    const std::string text = serialize_for_baseline(*g);
    const double huff = static_cast<double>(code.encode(text).size());
    const double six = static_cast<double>(sixbit.encode(text).size());
    Accum& a = buckets[nodes];
    a.semantic += sem;
    a.huffman += huff;
    a.six += six;
    ++a.n;
    result.mean_semantic_bits += sem;
    result.mean_huffman_bits += huff;
    result.mean_sixbit_bits += six;
  }
  const double n = static_cast<double>(eval_graphs.size());
  result.mean_semantic_bits /= n;
  result.mean_huffman_bits /= n;
  result.mean_sixbit_bits /= n;
  result.gain_vs_huffman = result.mean_huffman_bits / result.mean_semantic_bits;
  result.gain_vs_sixbit = result.mean_sixbit_bits / result.mean_semantic_bits;

  result.csv_path = cfg.run_dir + "/fig4.csv";
  CsvWriter csv(result.csv_path, {"nodes", "scheme", "mean_bits_per_graph", "graphs"});
  std::vector<Series> series(3);
  series[0].label = "semantic";
  series[1].label = "huffman";
  series[2].label = "sixbit";
  for (auto& [nodes, a] : buckets) {
    result.graphs_per_bucket[nodes] = a.n;
    result.by_nodes[nodes]["semantic"] = a.semantic / a.n;
    result.by_nodes[nodes]["huffman"] = a.huffman / a.n;
    result.by_nodes[nodes]["sixbit"] = a.six / a.n;
    csv.row({std::to_string(nodes), "semantic", csv_double(a.semantic / a.n),
             std::to_string(a.n)});
    csv.row({std::to_string(nodes), "huffman", csv_double(a.huffman / a.n),
             std::to_string(a.n)});
    csv.row({std::to_string(nodes), "sixbit", csv_double(a.six / a.n),
             std::to_string(a.n)});
    series[0].x.push_back(nodes);
    series[0].y.push_back(a.semantic / a.n);
    series[1].x.push_back(nodes);
    series[1].y.push_back(a.huffman / a.n);
    series[2].x.push_back(nodes);
    series[2].y.push_back(a.six / a.n);
  }

  CsvWriter summary(cfg.run_dir + "/fig4_summary.csv",
                    {"scheme", "mean_bits_per_graph", "gain_vs_semantic"});
  summary.row({"semantic", csv_double(result.mean_semantic_bits), csv_double(1.0)});
  summary.row({"huffman", csv_double(result.mean_huffman_bits),
               csv_double(result.gain_vs_huffman)});
  summary.row({"sixbit", csv_double(result.mean_sixbit_bits),
               csv_double(result.gain_vs_sixbit)});

  write_svg_plot(cfg.run_dir + "/fig4.svg", "Transmitted bits vs graph size",
                 "nodes per graph", "bits per graph", series);
  return result;
}

std::vector<BaselinePoint> run_baseline(const ExperimentConfig& cfg,
                                        const std::vector<double>& snr_grid) {
  if (snr_grid.empty()) throw ConfigError("baseline: empty SNR grid");
  ensure_run_dir(cfg);
  ExperimentContext ctx = load_context(cfg);
  const auto eval_graphs = select_graphs(split_by_name(ctx.data, cfg.eval.split),
                                         cfg.dataset.max_eval_graphs);
  const baselines::HuffmanCode code = baselines::HuffmanCode::build(
      baselines::build_codebook_corpus(select_graphs(ctx.data.train, 0)));

  std::vector<BaselinePoint> out;
  CsvWriter csv(cfg.run_dir + "/baseline.csv",
                {"snr_db", "scheme", "macro_f1", "mean_coded_bits"});
  for (baselines::SourceCoder coder :
       {baselines::SourceCoder::huffman, baselines::SourceCoder::sixbit}) {
    const std::string scheme =
        coder == baselines::SourceCoder::huffman ? "huffman" : "sixbit";
    for (double snr : snr_grid) {
      std::vector<F1Report> reports;
      double bits = 0.0;
      for (const KnowledgeGraph* g : eval_graphs) {
        baselines::BaselineRun run = baselines::classical_pipeline_run(
            *g, coder, &code, snr, false, cfg.eval.draw_seed);
        reports.push_back(triple_f1(run.triples, graph_to_triples(*g)));
        bits += static_cast<double>(run.coded_bits);
      }
      BaselinePoint p{snr, scheme, summarize_f1(reports).macro_f1,
                      bits / static_cast<double>(eval_graphs.size())};
      out.push_back(p);
      csv.row({csv_double(p.snr_db), p.scheme, csv_double(p.macro_f1),
               csv_double(p.mean_coded_bits)});
    }
  }
  return out;
}

}  // namespace semcom::eval
