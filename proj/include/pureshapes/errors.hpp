#pragma once

#include <stdexcept>
#include <string>

namespace pureshapes {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tuple validation failures carry the offending 1-based indices.
struct validation_error : error {
    enum class kind { bad_length, not_squarefree, not_coprime, degenerate_unit };
    kind which;
    int i = 0, j = 0;
    validation_error(kind k, std::string msg, int i_ = 0, int j_ = 0)
        : error(std::move(msg)), which(k), i(i_), j(j_) {}
};

struct base_mismatch : error { using error::error; };
struct nonpositive_value : error { using error::error; };
struct not_p_power_free : error { using error::error; };
struct factorization_too_large : error { using error::error; };
struct wrong_type : error { using error::error; };
struct prime_mismatch : error { using error::error; };
struct invalid_window : error { using error::error; };
struct bound_too_small : error { using error::error; };
struct infeasible_bound : error { using error::error; };
struct too_large : error { using error::error; };
struct divisibility_failure : error { using error::error; };
struct precision_loss : error { using error::error; };

} // namespace pureshapes
