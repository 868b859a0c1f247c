#pragma once

// The spin-1/2 (polarization) configuration used throughout the tests and the
// `example` command: A = [[9/5, 2i/5], [-2i/5, 6/5]], |i> = |H>,
// |f> = sin(eps)|H> + cos(eps)|V>.

#include "weakoam/algebra.hpp"

namespace weakoam::worked_example {

Observable observable();
SystemState pre_state();
SystemState post_state(double epsilon);

// Reference values in closed form.
cplx weak_value(double epsilon);         // 9/5 - (2/5) i / tan(eps)
cplx second_weak_moment(double epsilon); // 17/5 - (6/5) i / tan(eps)

}  // namespace weakoam::worked_example
