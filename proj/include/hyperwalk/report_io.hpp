#ifndef HYPERWALK_REPORT_IO_HPP
#define HYPERWALK_REPORT_IO_HPP

#include <string>

#include "hyperwalk/tasks.hpp"

namespace hyperwalk {

/// Shortest round-trip decimal form; identical bytes for identical doubles.
std::string format_double(double value);

std::string to_json_string(const BalanceReport& report);
std::string to_json_string(const TransitionMatrix& t);
std::string to_json_string(const FoldSplit& split, const Hypergraph& h);
std::string to_json_string(const NegativeSet& negatives, const Hypergraph& h);
std::string to_json_string(const DetectionReport& report);
std::string to_json_string(const PredictionReport& report);

/// `method,bin,fold,metric,value` rows; aggregate rows use fold = mean|std.
std::string detection_csv(const DetectionReport& report);
std::string prediction_csv(const PredictionReport& report);

/// `step<TAB>method<TAB>gap` with a header line.
std::string gap_tsv(const GapCurves& curves);

void write_file(const std::string& path, const std::string& content);

}  // namespace hyperwalk

#endif
