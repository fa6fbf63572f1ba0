#ifndef CK_ODE_HPP
#define CK_ODE_HPP

#include <functional>
#include <span>
#include <vector>

namespace ck::ode {

// Right-hand side f(t, y) -> dy. dy.size() == y.size().
using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

struct Options {
    double rtol = 1e-10;
    double atol = 1e-10;
    double initial_step = 0.0; // 0 => automatic
    double max_step = 0.0;     // 0 => |t_end - t0|
    long max_steps = 4000000;
};

// One accepted step with its degree-7 interpolation coefficients (8 per
// component, nested-polynomial form).
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<double> cont;

    void eval(double t, std::span<double> y) const;
};

// Piecewise polynomial solution over the integrated span.
class DenseOutput {
public:
    std::vector<DenseStep> steps;

    bool empty() const { return steps.empty(); }
    double t_front() const { return steps.front().t0; }
    double t_back() const { return steps.back().t0 + steps.back().h; }
    void eval(double t, std::span<double> y) const;
    std::vector<double> eval(double t) const;
};

// Scalar event function; a root of value() along the solution is an event.
// direction: +1 only rising crossings, -1 only falling, 0 both.
struct Event {
    std::function<double(double t, std::span<const double> y)> value;
    int direction = 0;
    bool terminal = true;
};

struct EventHit {
    int index = 0; // which Event
    double t = 0.0;
    std::vector<double> y;
};

enum class Stop { ReachedEnd, Event, StepUnderflow, MaxSteps };

struct Result {
    Stop stop = Stop::ReachedEnd;
    double t = 0.0;
    std::vector<double> y;
    int event_index = -1;            // terminal event that fired, if any
    std::vector<EventHit> hits;      // all event hits, terminal or not
    long n_steps = 0;
    long n_rhs = 0;
    DenseOutput dense;               // filled when keep_dense is set
};

// Observer called at t0 and after every accepted step (post event-clipping).
using StepObserver = std::function<void(double t, std::span<const double> y)>;

// Dormand-Prince 8(5,3) with PI step-size control, 7th-order dense output
// and root-located events. Integrates forward only (t_end > t0).
Result integrate_dop853(const Rhs& rhs, double t0, std::span<const double> y0,
                        double t_end, const Options& opt = {},
                        std::span<const Event> events = {}, bool keep_dense = false,
                        const StepObserver& observer = {});

} // namespace ck::ode

#endif
