#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sepind/decompose.hpp"
#include "sepind/hermitian_core.hpp"

namespace sepind {

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Two-qubit Werner family, f in [0, 1].
HermitianOperator werner(double f);

/// The 8x8 operator on C^2 (x) C^4 with trace 1 + 7b, b in [0, 1];
/// divided by its trace when normalized.
HermitianOperator rho_b(double b, bool normalized = false);

/// Three-qubit diagonal operator (1, a, b, c, 1/a, 1/b, 1/c, 1) with corner
/// coupling between |000> and |111>; a, b, c > 0.
HermitianOperator example3(double a, double b, double c);

HermitianOperator maximally_mixed(const DimProfile& profile);

enum class WorkedExample { Example1, Example2, Example3 };

/// Hard-coded factorizations of the worked states. Example1 takes {"b"},
/// Example2 takes {"f"}, Example3 takes {"a", "b", "c"}.
TensorFactorization paper_factorization(WorkedExample which, const std::map<std::string, double>& params);

/// The unit-matrix expansion of rho_b term by term, E_kl^2 (x) E_i'j'^4 with its
/// coefficient, grouped by weight (16 terms).
std::vector<UnitProduct> example1_unit_terms(double b);

enum class StateName { Werner, RhoB, Example3, MaximallyMixed, Custom };

std::string_view to_string(StateName s);
std::optional<StateName> parse_state_name(std::string_view s);

struct StateSpec {
    StateName name = StateName::Werner;
    std::map<std::string, double> parameters;
};

/// Builds a named state after validating its parameter domain. MaximallyMixed
/// takes its profile separately; Custom has no factory and throws.
HermitianOperator make_state(const StateSpec& spec, const std::optional<DimProfile>& profile = std::nullopt);

/// Natural profile of a named state.
DimProfile default_profile(StateName s);

}  // namespace sepind
