// quick scratch: the heavy acceptance-5 instances
use jacobi_core::quotient::*;
fn main() {
    for n in [1usize, 2] {
        for r in 1..=3usize {
            let t = std::time::Instant::now();
            let rep = compare(&scaling_instance(n), r).unwrap();
            println!("scaling n={n} r={r}: pass={} dims={:?} ({:?})", rep.pass, rep.kernel_graded_dims, t.elapsed());
            assert!(rep.pass, "{:?}", rep.failure);
        }
    }
    for r in 1..=2usize {
        let t = std::time::Instant::now();
        let rep = compare(&torus_p1xp1_instance(), r).unwrap();
        println!("torus r={r}: pass={} dims={:?} ({:?})", rep.pass, rep.kernel_graded_dims, t.elapsed());
        assert!(rep.pass, "{:?}", rep.failure);
    }
}
