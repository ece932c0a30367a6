#ifndef FRACLIND_LABELS_HPP
#define FRACLIND_LABELS_HPP

#include <string>
#include <vector>

namespace fraclind {

// Component labels for an N degrees-of-freedom system in resonance-adapted
// coordinates (A_1..A_{N-1}, B, alpha_1..alpha_{N-1}, beta), indexed 0..2N-1:
//   0..N-2   fast actions A_i
//   N-1      slow action  B
//   N..2N-2  fast angles  alpha_i
//   2N-1     slow angle   beta
struct Labels {
    int N;

    explicit Labels(int n) : N(n) {}

    int count() const { return 2 * N; }
    int B() const { return N - 1; }
    int beta() const { return 2 * N - 1; }
    int A(int i) const { return i; }          // i in 0..N-2
    int alpha(int i) const { return N + i; }  // i in 0..N-2

    bool is_action(int g) const { return g < N; }
    bool is_angle(int g) const { return g >= N; }
    bool is_fast_action(int g) const { return g < N - 1; }
    bool is_fast_angle(int g) const { return g >= N && g < 2 * N - 1; }

    /// Involution pairing each action with its conjugate angle.
    int partner(int g) const { return is_action(g) ? g + N : g - N; }

    std::string name(int g) const;
    /// Parses "A1", "B", "a1"/"alpha1", "b"/"beta"; returns -1 on failure.
    int parse(const std::string& s) const;
};

}  // namespace fraclind

#endif
