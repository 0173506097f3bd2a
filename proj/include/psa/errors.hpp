// SPDX-License-Identifier: Apache-2.0
//
// psa-secure: polarization sensitive array secure beamforming
// Copyright (C) 2026 psa-secure contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef PSA_ERRORS_HPP
#define PSA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace psa
{
    enum class ErrorKind
    {
        singular_b,
        max_iterations,
        stalled,
        invalid_bracket,
        infeasible,
        degenerate_manifold,
        degenerate_nullspace,
        config
    };

    const char *error_kind_name(ErrorKind kind);

    class PsaError : public std::runtime_error
    {
    public:
        PsaError(ErrorKind kind, const std::string &what)
            : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
        ErrorKind kind() const { return kind_; }

    private:
        ErrorKind kind_;
    };

    // Typed aliases so callers can catch one failure mode.
    template <ErrorKind K>
    class KindError : public PsaError
    {
    public:
        explicit KindError(const std::string &what) : PsaError(K, what) {}
    };

    using SingularB = KindError<ErrorKind::singular_b>;
    using MaxIterations = KindError<ErrorKind::max_iterations>;
    using Stalled = KindError<ErrorKind::stalled>;
    using InvalidBracket = KindError<ErrorKind::invalid_bracket>;
    using Infeasible = KindError<ErrorKind::infeasible>;
    using DegenerateManifold = KindError<ErrorKind::degenerate_manifold>;
    using DegenerateNullspace = KindError<ErrorKind::degenerate_nullspace>;
    using ConfigError = KindError<ErrorKind::config>;

    inline const char *error_kind_name(ErrorKind kind)
    {
        switch (kind)
        {
        case ErrorKind::singular_b: return "SingularB";
        case ErrorKind::max_iterations: return "MaxIterations";
        case ErrorKind::stalled: return "Stalled";
        case ErrorKind::invalid_bracket: return "InvalidBracket";
        case ErrorKind::infeasible: return "Infeasible";
        case ErrorKind::degenerate_manifold: return "DegenerateManifold";
        case ErrorKind::degenerate_nullspace: return "DegenerateNullspace";
        case ErrorKind::config: return "ConfigError";
        }
        return "PsaError";
    }

} // namespace psa

#endif
