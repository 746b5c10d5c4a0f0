#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ordtest/procedures.hpp"
#include "ordtest/simulation.hpp"

namespace ordtest {

/// 17 significant digits: enough to reproduce any double exactly.
std::string format_double(double v);

/// Reads one bare decimal per line, or `id,value` rows when the first line
/// contains a comma (that line is treated as a header and skipped). Line
/// order is the testing order. An empty file is a valid empty sequence.
/// Throws ParseError (with the offending line number) on malformed or
/// out-of-range values, IoError when the file cannot be opened.
PValueSequence parse_pvalue_file(const std::filesystem::path& path);

// CSV tables all start with a `# schema=...` line followed by the column
// header; numbers are emitted with 17 significant digits so identical
// inputs produce byte-identical files.
void write_rejection_csv(std::ostream& os, const PValueSequence& pvals,
                         const RejectionOutcome& outcome);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
void write_fig1_csv(std::ostream& os, const PathVsLimitTable& table);
void write_fig2_csv(std::ostream& os, const std::vector<PowerCurveRow>& rows);
void write_fig3_csv(std::ostream& os, const std::vector<PowerDistRow>& rows);

void write_rejection_json(std::ostream& os, const PValueSequence& pvals,
                          const RejectionOutcome& outcome);

/// Rebuilds an outcome written by write_rejection_json; the round trip is
/// exact, including every fdp_path entry.
RejectionOutcome rejection_from_json(std::istream& is);

/// JSON experiment description (see README for the schema).
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

std::string procedure_kind_name(ProcedureKind kind);
ProcedureKind procedure_kind_from_name(const std::string& name);

std::string accumulation_kind_name(AccumulationFn::Kind kind);

}  // namespace ordtest
