//! The seven built-in simulation cases.
//!
//! Each preset bundles the two competing distributions, the per-class
//! reference windows the uniforms are drawn over, and the method rows that
//! are applicable (kernel baselines only exist in one dimension). Windows
//! for unbounded densities follow the three-sigma rule around the class
//! mean; windows for bounded supports extend somewhat past the support so
//! boundary cells are visibly oversized and the correction can flatten them.

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::experiment::Method;
use crate::geometry::SupportWindow;

/// A named, fully parameterised two-class simulation setup.
#[derive(Debug, Clone)]
pub struct CasePreset {
    pub name: &'static str,
    pub summary: &'static str,
    pub class1: Distribution,
    pub class2: Distribution,
    pub window1: SupportWindow,
    pub window2: SupportWindow,
    pub methods: Vec<Method>,
}

impl CasePreset {
    pub fn dim(&self) -> usize {
        self.class1.dim()
    }
}

fn methods_1d() -> Vec<Method> {
    vec![
        Method::Nn1,
        Method::Nn10,
        Method::Nn25,
        Method::Lda,
        Method::Qda,
        Method::GaussianKernel,
        Method::EpanechnikovKernel,
    ]
}

fn methods_no_kernel() -> Vec<Method> {
    vec![Method::Nn1, Method::Nn10, Method::Nn25, Method::Lda, Method::Qda]
}

/// All presets, in order.
pub fn all_cases() -> Vec<CasePreset> {
    let interval = |lo, hi| SupportWindow::interval(lo, hi).expect("static window");
    vec![
        CasePreset {
            name: "case1",
            summary: "Unif[(0,1)u(6,7)] vs N(3.5, 4)",
            class1: Distribution::uniform_union(vec![(0.0, 1.0), (6.0, 7.0)]).expect("static"),
            class2: Distribution::normal(3.5, 4.0).expect("static"),
            window1: interval(-2.0, 9.0),
            window2: interval(-8.5, 15.5),
            methods: methods_1d(),
        },
        CasePreset {
            name: "case2",
            summary: "0.5 N(0,1) + 0.5 N(5,1) vs N(2.5, 4)",
            class1: Distribution::normal_mixture(vec![(0.5, 0.0, 1.0), (0.5, 5.0, 1.0)])
                .expect("static"),
            class2: Distribution::normal(2.5, 4.0).expect("static"),
            window1: interval(-3.0, 8.0),
            window2: interval(-9.5, 14.5),
            methods: methods_1d(),
        },
        CasePreset {
            name: "case3",
            summary: "Unif[(0,1)u(5,6)] vs Unif[(2,3)u(6,7)]",
            class1: Distribution::uniform_union(vec![(0.0, 1.0), (5.0, 6.0)]).expect("static"),
            class2: Distribution::uniform_union(vec![(2.0, 3.0), (6.0, 7.0)]).expect("static"),
            window1: interval(-2.0, 8.0),
            window2: interval(0.0, 9.0),
            methods: methods_1d(),
        },
        CasePreset {
            name: "case4",
            summary: "Pareto(1, 3) vs Pareto(1.29, 7)",
            class1: Distribution::pareto(1.0, 3.0).expect("static"),
            class2: Distribution::pareto(1.29, 7.0).expect("static"),
            window1: interval(-1.0, 9.0),
            window2: interval(-1.0, 9.0),
            methods: methods_1d(),
        },
        CasePreset {
            name: "case5",
            summary: "N(0,1) vs N(3, 6)",
            class1: Distribution::normal(0.0, 1.0).expect("static"),
            class2: Distribution::normal(3.0, 6.0).expect("static"),
            window1: interval(-3.0, 3.0),
            window2: interval(-15.0, 21.0),
            methods: methods_no_kernel(),
        },
        CasePreset {
            name: "case6",
            summary: "Unif annuli, radius (5,6)u(9,10) vs N2(0, 36 I)",
            class1: Distribution::annulus_union_uniform(vec![(5.0, 6.0), (9.0, 10.0)])
                .expect("static"),
            class2: Distribution::bivariate_normal(
                crate::geometry::Point::two_d(0.0, 0.0),
                [[36.0, 0.0], [0.0, 36.0]],
            )
            .expect("static"),
            window1: SupportWindow::annulus(4.0, 11.0).expect("static"),
            // The three-sigma disc for a sd-6 bivariate normal.
            window2: SupportWindow::annulus(0.0, 18.0).expect("static"),
            methods: methods_no_kernel(),
        },
        CasePreset {
            name: "case7",
            summary: "uniform on the unit circle vs projected N2(0, diag(1,4))",
            class1: Distribution::projected_normal_circle([[1.0, 0.0], [0.0, 1.0]])
                .expect("static"),
            class2: Distribution::projected_normal_circle([[1.0, 0.0], [0.0, 4.0]])
                .expect("static"),
            window1: SupportWindow::circle(1.0).expect("static"),
            window2: SupportWindow::circle(1.0).expect("static"),
            methods: methods_no_kernel(),
        },
    ]
}

/// Look up a preset by name (`case1` .. `case7`).
pub fn case_by_name(name: &str) -> Result<CasePreset> {
    all_cases().into_iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownCase {
        name: name.to_string(),
        valid: all_cases().iter().map(|c| c.name).collect::<Vec<_>>().join(", "),
    })
}
