// CSV / JSON emission of slot records and sweep rows.
#pragma once

#include <string>
#include <vector>

#include "mecbf/harness.hpp"

namespace mecbf {

extern const char* const kSlotCsvHeader;
extern const char* const kSweepCsvHeader;

enum class OutputFormat { kCsv, kJson };
OutputFormat parse_format(const std::string& name);

/// Numbers at 12 significant digits; non-finite values as inf / -inf / nan.
std::string format_number(double x);

std::string emit_results(const std::vector<SlotRecord>& records, OutputFormat format);
std::string slot_csv(const std::vector<SlotRecord>& records);
std::string slot_json(const std::vector<SlotRecord>& records);

/// Inverse of slot_csv / slot_json for the emitted fields. `failed` is
/// restored from the failure flags.
std::vector<SlotRecord> parse_slot_csv(const std::string& text);
std::vector<SlotRecord> parse_slot_json(const std::string& text);

/// True when every emitted field agrees at the emitted precision.
bool same_emitted(const SlotRecord& a, const SlotRecord& b);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows);

}  // namespace mecbf
