// Copyright 2026 The eprb Authors
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

#ifndef EPRB_ERRORS_HPP
#define EPRB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eprb {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed documents, invalid matrices, clashing labels.
/// The CLI maps these to exit code 2.
struct InputError : Error {
    using Error::Error;
};

/// A decomposition failed its own reconstruction self-check. The CLI maps
/// these to exit code 3.
struct NumericalFailure : Error {
    using Error::Error;
};

struct NotHermitian : InputError {
    using InputError::InputError;
};

struct NotPSD : InputError {
    using InputError::InputError;
};

struct NotUnitary : InputError {
    using InputError::InputError;
};

struct DimensionMismatch : InputError {
    using InputError::InputError;
};

struct LabelClash : InputError {
    using InputError::InputError;
};

struct EmptyKeepSet : InputError {
    using InputError::InputError;
};

struct ParseError : InputError {
    using InputError::InputError;
};

/// Validation failure with the offending field path, e.g.
/// "commit_rounds[1].matrix: not unitary (residual 3.2e-04)".
struct ValidationError : InputError {
    ValidationError(const std::string& field, const std::string& reason)
        : InputError(field + ": " + reason), field(field), reason(reason) {}
    std::string field;
    std::string reason;
};

struct UnknownBuiltin : InputError {
    using InputError::InputError;
};

struct BadParams : InputError {
    using InputError::InputError;
};

/// The two remote marginals differ too much for the exact cheat construction.
struct NotIdealHiding : InputError {
    using InputError::InputError;
};

struct LastRoundActorMismatch : InputError {
    using InputError::InputError;
};

/// Conditioned receiver states are not orthogonal enough to drop the round.
struct TruncationUnsound : InputError {
    explicit TruncationUnsound(double max_fidelity)
        : InputError("truncation unsound: max pairwise conditioned fidelity " +
                     std::to_string(max_fidelity)),
          max_fidelity(max_fidelity) {}
    double max_fidelity;
};

struct NonLocalOperation : InputError {
    using InputError::InputError;
};

struct NonPositiveEpsilon : InputError {
    using InputError::InputError;
};

}  // namespace eprb

#endif
