#include "weakoam/worked_example.hpp"

#include <cmath>

namespace weakoam::worked_example {

Observable observable() {
    Matrix a(2, 2);
    a << cplx(9.0 / 5.0, 0.0), cplx(0.0, 2.0 / 5.0),
         cplx(0.0, -2.0 / 5.0), cplx(6.0 / 5.0, 0.0);
    return Observable::make(a);
}

SystemState pre_state() {
    return SystemState::basis(2, 0);
}

SystemState post_state(double epsilon) {
    Vector f(2);
    f << std::sin(epsilon), std::cos(epsilon);
    return SystemState::normalized(f);
}

cplx weak_value(double epsilon) {
    return {9.0 / 5.0, -(2.0 / 5.0) / std::tan(epsilon)};
}

cplx second_weak_moment(double epsilon) {
    return {17.0 / 5.0, -(6.0 / 5.0) / std::tan(epsilon)};
}

}  // namespace weakoam::worked_example
