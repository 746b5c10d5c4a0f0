#include "ordtest/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ordtest/errors.hpp"

#include "json.hpp"

namespace ordtest {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_pvalue_token(const std::string& token, std::size_t line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("cannot parse p-value '" + token + "'", line_no);
  }
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ParseError("p-value " + token + " outside [0,1]", line_no);
  }
  return value;
}

json accumulation_to_json(const AccumulationFn& h) {
  json j;
  j["kind"] = accumulation_kind_name(h.kind());
  switch (h.kind()) {
    case AccumulationFn::Kind::SeqStep:
    case AccumulationFn::Kind::HingeExp:
      j["c"] = h.param();
      break;
    case AccumulationFn::Kind::Custom:
      j["x"] = h.knots_x();
      j["h"] = h.knots_h();
      break;
    case AccumulationFn::Kind::ForwardStop:
      break;
  }
  return j;
}

AccumulationFn accumulation_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "forwardstop") return AccumulationFn::forward_stop();
  if (kind == "seqstep") return AccumulationFn::seq_step(j.at("c").get<double>());
  if (kind == "hingeexp") return AccumulationFn::hinge_exp(j.at("c").get<double>());
  if (kind == "custom") {
    return AccumulationFn::custom(j.at("x").get<std::vector<double>>(),
                                  j.at("h").get<std::vector<double>>());
  }
  throw std::invalid_argument("unknown accumulation kind '" + kind + "'");
}

json spec_to_json(const ProcedureSpec& spec) {
  json j;
  j["kind"] = procedure_kind_name(spec.kind);
  j["q"] = spec.q;
  switch (spec.kind) {
    case ProcedureKind::BH:
      break;
    case ProcedureKind::StoreyBH:
      j["lambda"] = spec.lambda;
      break;
    case ProcedureKind::SelectiveSeqStep:
      j["s"] = spec.s;
      break;
    case ProcedureKind::AdaptiveSeqStep:
      j["s"] = spec.s;
      j["lambda"] = spec.lambda;
      break;
    case ProcedureKind::AccumulationTest:
      j["accumulation"] = accumulation_to_json(*spec.accumulation);
      break;
  }
  return j;
}

ProcedureSpec spec_from_json(const json& j) {
  const ProcedureKind kind = procedure_kind_from_name(j.at("kind").get<std::string>());
  const double q = j.at("q").get<double>();
  switch (kind) {
    case ProcedureKind::BH:
      return ProcedureSpec::bh(q);
    case ProcedureKind::StoreyBH:
      return ProcedureSpec::storey_bh(q, j.at("lambda").get<double>());
    case ProcedureKind::SelectiveSeqStep:
      return ProcedureSpec::selective_seqstep(q, j.at("s").get<double>());
    case ProcedureKind::AdaptiveSeqStep:
      return ProcedureSpec::adaptive_seqstep(q, j.at("s").get<double>(),
                                             j.at("lambda").get<double>());
    case ProcedureKind::AccumulationTest:
      return ProcedureSpec::accumulation_test(
          q, accumulation_from_json(j.at("accumulation")));
  }
  throw std::invalid_argument("unknown procedure kind");
}

std::string spec_csv_fields(const ProcedureSpec& spec) {
  // method,q,s,lambda,accumulation
  std::string out = procedure_kind_name(spec.kind);
  out += ',';
  out += format_double(spec.q);
  out += ',';
  const bool uses_s = spec.kind == ProcedureKind::SelectiveSeqStep ||
                      spec.kind == ProcedureKind::AdaptiveSeqStep;
  const bool uses_lambda = spec.kind == ProcedureKind::StoreyBH ||
                           spec.kind == ProcedureKind::AdaptiveSeqStep;
  out += uses_s ? format_double(spec.s) : "";
  out += ',';
  out += uses_lambda ? format_double(spec.lambda) : "";
  out += ',';
  out += spec.accumulation ? spec.accumulation->name() : "";
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

PValueSequence parse_pvalue_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }

  PValueSequence seq;
  std::string line;
  std::size_t line_no = 0;
  bool csv_mode = false;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty()) continue;
    if (first_content_line) {
      first_content_line = false;
      csv_mode = content.find(',') != std::string::npos;
      if (csv_mode) continue;  // header row
    }
    if (csv_mode) {
      const auto comma = content.find(',');
      if (comma == std::string::npos) {
        throw ParseError("expected 'id,value'", line_no);
      }
      seq.ids.push_back(trim(content.substr(0, comma)));
      seq.values.push_back(
          parse_pvalue_token(trim(content.substr(comma + 1)), line_no));
    } else {
      seq.values.push_back(parse_pvalue_token(content, line_no));
    }
  }
  seq.validate();
  return seq;
}

void write_rejection_csv(std::ostream& os, const PValueSequence& pvals,
                         const RejectionOutcome& outcome) {
  os << "# schema=ordtest.reject.v1\n";
  os << "index,id,pvalue,rejected,fdp_path\n";
  std::vector<bool> mask(pvals.size(), false);
  for (std::size_t idx : outcome.rejected) mask[idx - 1] = true;
  for (std::size_t i = 0; i < pvals.size(); ++i) {
    os << (i + 1) << ',' << (pvals.has_ids() ? pvals.ids[i] : "") << ','
       << format_double(pvals.values[i]) << ',' << (mask[i] ? 1 : 0) << ','
       << format_double(outcome.fdp_path[i]) << '\n';
  }
}

void write_rejection_json(std::ostream& os, const PValueSequence& pvals,
                          const RejectionOutcome& outcome) {
  json j;
  j["schema"] = "ordtest.reject.v1";
  j["k_hat"] = outcome.k_hat;
  j["rejected"] = outcome.rejected;
  j["fdp_path"] = outcome.fdp_path;
  j["spec"] = spec_to_json(outcome.spec_used);
  j["pvalues"] = pvals.values;
  if (pvals.has_ids()) j["ids"] = pvals.ids;
  os << j.dump(2) << '\n';
}

RejectionOutcome rejection_from_json(std::istream& is) {
  json j = json::parse(is);
  RejectionOutcome outcome;
  outcome.k_hat = j.at("k_hat").get<std::size_t>();
  outcome.rejected = j.at("rejected").get<std::vector<std::size_t>>();
  outcome.fdp_path = j.at("fdp_path").get<std::vector<double>>();
  outcome.spec_used = spec_from_json(j.at("spec"));
  return outcome;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "# schema=ordtest.summary.v1\n";
  os << "gamma,b,mu,n,method,q,s,lambda,accumulation,n_reps,base_seed,"
        "mean_fdr,se_fdr,mean_power,power_p05,power_p50,power_p95,"
        "mean_k_hat_frac,asym_power\n";
  for (const SummaryRow& row : rows) {
    os << format_double(row.params.gamma) << ',' << format_double(row.params.b)
       << ',' << format_double(row.params.mu) << ',' << row.params.n << ','
       << spec_csv_fields(row.spec) << ',' << row.n_reps << ',' << row.base_seed
       << ',' << format_double(row.mean_fdr) << ',' << format_double(row.se_fdr)
       << ',' << format_double(row.mean_power) << ','
       << format_double(row.power_p05) << ',' << format_double(row.power_p50)
       << ',' << format_double(row.power_p95) << ','
       << format_double(row.mean_k_hat_frac) << ','
       << format_double(row.asym_power) << '\n';
  }
}

void write_fig1_csv(std::ostream& os, const PathVsLimitTable& table) {
  os << "# schema=ordtest.fig1.v1\n";
  os << "# chi=" << format_double(table.chi) << '\n';
  os << "# t_star=" << format_double(table.t_star) << '\n';
  os << "# gamma=" << format_double(table.params.gamma)
     << " b=" << format_double(table.params.b)
     << " mu=" << format_double(table.params.mu) << " n=" << table.params.n
     << " q=" << format_double(table.q) << " s=" << format_double(table.s)
     << " lambda=" << format_double(table.lambda) << " seed=" << table.seed
     << (table.b_clamped ? " b_clamped=1" : "") << '\n';
  os << "k,t,fdp_hat,fdp_star\n";
  for (const PathPoint& pt : table.points) {
    os << pt.k << ',' << format_double(pt.t) << ',' << format_double(pt.fdp_hat)
       << ',' << format_double(pt.fdp_star) << '\n';
  }
}

void write_fig2_csv(std::ostream& os, const std::vector<PowerCurveRow>& rows) {
  os << "# schema=ordtest.fig2.v1\n";
  os << "regime,gamma,mu,b,method,chi,t_star,asym_power\n";
  for (const PowerCurveRow& row : rows) {
    os << row.regime << ',' << format_double(row.gamma) << ','
       << format_double(row.mu) << ',' << format_double(row.b) << ','
       << row.method << ',' << format_double(row.chi) << ','
       << format_double(row.t_star) << ',' << format_double(row.power) << '\n';
  }
}

void write_fig3_csv(std::ostream& os, const std::vector<PowerDistRow>& rows) {
  os << "# schema=ordtest.fig3.v1\n";
  os << "lambda,s_mode,s,n,n_reps,mean_power,power_p05,power_p50,power_p95,"
        "mean_k_hat_frac,mean_fdr,se_fdr,asym_power\n";
  for (const PowerDistRow& row : rows) {
    const SummaryRow& s = row.summary;
    os << format_double(row.lambda) << ',' << row.s_mode << ','
       << format_double(row.s) << ',' << row.n << ',' << s.n_reps << ','
       << format_double(s.mean_power) << ',' << format_double(s.power_p05)
       << ',' << format_double(s.power_p50) << ',' << format_double(s.power_p95)
       << ',' << format_double(s.mean_k_hat_frac) << ','
       << format_double(s.mean_fdr) << ',' << format_double(s.se_fdr) << ','
       << format_double(s.asym_power) << '\n';
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what(), 0);
  }

  ExperimentConfig config;
  const json& model = j.at("model");
  config.gammas = model.at("gamma").get<std::vector<double>>();
  config.bs = model.at("b").get<std::vector<double>>();
  config.mus = model.at("mu").get<std::vector<double>>();
  config.ns = model.at("n").get<std::vector<std::size_t>>();
  for (const json& spec : j.at("procedures")) {
    config.procedures.push_back(spec_from_json(spec));
  }
  config.n_reps = j.at("n_reps").get<std::size_t>();
  config.base_seed = j.value("base_seed", std::uint64_t{0});
  config.output = j.value("output", std::string{});
  config.validate();
  return config;
}

std::string procedure_kind_name(ProcedureKind kind) {
  switch (kind) {
    case ProcedureKind::BH:
      return "bh";
    case ProcedureKind::StoreyBH:
      return "storey_bh";
    case ProcedureKind::SelectiveSeqStep:
      return "selective_seqstep";
    case ProcedureKind::AdaptiveSeqStep:
      return "adaptive_seqstep";
    case ProcedureKind::AccumulationTest:
      return "accumulation_test";
  }
  return "?";
}

ProcedureKind procedure_kind_from_name(const std::string& name) {
  if (name == "bh") return ProcedureKind::BH;
  if (name == "storey_bh" || name == "sbh") return ProcedureKind::StoreyBH;
  if (name == "selective_seqstep" || name == "ss") return ProcedureKind::SelectiveSeqStep;
  if (name == "adaptive_seqstep" || name == "as") return ProcedureKind::AdaptiveSeqStep;
  if (name == "accumulation_test" || name == "at") return ProcedureKind::AccumulationTest;
  throw std::invalid_argument("unknown procedure '" + name + "'");
}

std::string accumulation_kind_name(AccumulationFn::Kind kind) {
  switch (kind) {
    case AccumulationFn::Kind::ForwardStop:
      return "forwardstop";
    case AccumulationFn::Kind::SeqStep:
      return "seqstep";
    case AccumulationFn::Kind::HingeExp:
      return "hingeexp";
    case AccumulationFn::Kind::Custom:
      return "custom";
  }
  return "?";
}

}  // namespace ordtest
