#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcw {

// Error classes map onto the CLI exit codes (2, 1, 3).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvariantFailure : std::logic_error {
    using std::logic_error::logic_error;
};
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Diagnostics {
    bool ok = true;
    std::string message;
    explicit operator bool() const { return ok; }
    static Diagnostics pass() { return {}; }
    static Diagnostics fail(std::string why) { return {false, std::move(why)}; }
};

struct PolygonParams {
    int n = 1;
    int m = 1;
    int N = 4;
    static PolygonParams make(int n, int m);
    bool operator==(const PolygonParams&) const = default;
};

struct Diagonal {
    int a = 0;
    int b = 0;
    auto operator<=>(const Diagonal&) const = default;
};

bool is_valid_diagonal(Diagonal d, int N);
// normalizes the endpoint order, throws InvalidInput
Diagonal make_diagonal(int a, int b, int N);
bool is_allowable(Diagonal d, const PolygonParams& p);
bool crosses(Diagonal d1, Diagonal d2);
std::string to_string(Diagonal d);

struct Dissection {
    PolygonParams params;
    std::vector<Diagonal> diagonals;  // sorted
    bool operator==(const Dissection&) const = default;
    int index_of(Diagonal d) const;  // -1 if absent
};

Dissection make_dissection(const PolygonParams& p, std::vector<Diagonal> diagonals);
Diagnostics validate_dissection(const Dissection& t);

struct Side {
    int from = 0;
    int to = 0;
    int diagonal = -1;  // index into the diagonal list, -1 for a boundary edge
    bool boundary() const { return diagonal < 0; }
};

struct Face {
    std::vector<int> corners;  // ascending labels
    std::vector<Side> sides;   // sides[i] joins corners[i] and corners[i+1 mod size]
};

// Faces of the dissection whose diagonals are the given list (any order).
// Side indices refer to positions in that list.
std::vector<Face> faces_of(const PolygonParams& p, const std::vector<Diagonal>& diagonals);
std::vector<Face> faces(const Dissection& t);

std::uint64_t fuss_catalan(int n, int m);

// Calls emit for every maximal dissection in lexicographic order of the
// sorted diagonal list. Refuses when the expected count exceeds cap.
void enumerate_dissections(const PolygonParams& p, const std::function<void(const Dissection&)>& emit,
                           std::uint64_t cap = 1000000);
std::vector<Dissection> all_dissections(const PolygonParams& p, std::uint64_t cap = 1000000);

// d_1 ... d_m, ordered by anti-clockwise rotation.
std::vector<Diagonal> rotation_targets(const PolygonParams& p, const std::vector<Diagonal>& diagonals, Diagonal d);
std::vector<Diagonal> rotation_targets(const Dissection& t, Diagonal d);
// Endpoint-shift formula for the k-th rotation, 1 <= k <= m.
Diagonal rotation_closed_form(const Dissection& t, Diagonal d, int k);

Diagonal move_target(const PolygonParams& p, const std::vector<Diagonal>& diagonals, Diagonal d, int k);
Dissection apply_move(const Dissection& t, Diagonal d, int k);

}  // namespace mcw
