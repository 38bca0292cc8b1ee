// Copyright 2026 The ech-lab Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "echlab/asymptotics.hpp"
#include "echlab/bounds.hpp"
#include "echlab/capacities.hpp"
#include "echlab/domain.hpp"
#include "echlab/folding.hpp"
#include "echlab/minkowski.hpp"
#include "echlab/packing.hpp"
#include "echlab/weights.hpp"

namespace echlab {

// Text I/O. Numbers are written with 17 significant digits in the C locale so
// that every double round-trips. JSON has no infinity; infinite values are
// written as null and read back as +infinity.

std::string format_double(double value);
double parse_double(std::string_view text);  // throws DomainError on junk

// Inline grammar:
//   spec    := ball:A | ellipsoid:A:B | polydisc:A:B | profile
//            | scale:C:spec | copies:N:spec | union(spec;spec;...)
//   profile := power:P | pl:X,Y:X,Y:...
// Either form may instead be a JSON document (first non-blank char '{').
Profile parse_profile(std::string_view text);
DomainSpec parse_spec(std::string_view text);

// JSON documents. indent < 0 gives a single line.
std::string to_json(const Profile& profile, int indent = -1);
std::string to_json(const DomainSpec& spec, int indent = -1);
std::string to_json(const WeightSequence& weights, int indent = -1);
std::string to_json(const CapacityBracket& bracket, int indent = -1);
std::string to_json(const std::vector<CapacityBracket>& brackets, int indent = -1);
std::string to_json(const std::vector<SubleadingPoint>& points, int indent = -1);
std::string to_json(const FitResult& fit, int indent = -1);
std::string to_json(const ExponentInterval& interval, int indent = -1);
std::string to_json(const EchDimension& dim, int indent = -1);
std::string to_json(const CubePacking& packing, int indent = -1);
std::string to_json(const std::vector<DecaySample>& samples, int indent = -1);
std::string to_json(const DimensionEstimate& estimate, int indent = -1);
std::string to_json(const ObstructionReport& report, int indent = -1);
std::string to_json(const SymplecticDefect& defect, int indent = -1);
std::string to_json(const InjectivityReport& report, int indent = -1);
std::string to_json(const FoldingCheckReport& report, int indent = -1);

// Plain RFC 4180 table with a header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  CsvTable& row(std::vector<std::string> cells);
  static std::string cell(double value) { return format_double(value); }
  static std::string cell(std::int64_t value) { return std::to_string(value); }
  static std::string cell(bool value) { return value ? "1" : "0"; }
  void write(std::ostream& out) const;
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

CsvTable to_csv(const std::vector<CapacityBracket>& brackets);
CsvTable to_csv(const WeightSequence& weights);
CsvTable to_csv(const std::vector<SubleadingPoint>& points);
CsvTable to_csv(const CubePacking& packing);
CsvTable to_csv(const std::vector<DecaySample>& samples);

}  // namespace echlab
