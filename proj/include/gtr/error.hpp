// Copyright 2026 The GTR Model Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gtr {

enum class ErrorKind {
    validation,
    parse,
    normalization_refused,
    degenerate_geometry,
    infeasible_geometry,
    degenerate_density,
    empty_support,
    closed_form_invalid,
    degenerate_table,
    gauge_infeasible,
    invariant,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::validation: return "validation";
        case ErrorKind::parse: return "parse";
        case ErrorKind::normalization_refused: return "normalization-refused";
        case ErrorKind::degenerate_geometry: return "degenerate-geometry";
        case ErrorKind::infeasible_geometry: return "infeasible-geometry";
        case ErrorKind::degenerate_density: return "degenerate-density";
        case ErrorKind::empty_support: return "empty-support";
        case ErrorKind::closed_form_invalid: return "closed-form-invalid";
        case ErrorKind::degenerate_table: return "degenerate-table";
        case ErrorKind::gauge_infeasible: return "gauge-infeasible";
        case ErrorKind::invariant: return "invariant";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace gtr
