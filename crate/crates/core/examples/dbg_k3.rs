use vwengine::ball::*;
use vwengine::numeval::*;

fn main() {
    let p = EvalPoint::new((13, 100), (11, 10), (7, 100), (3, 100), 160);
    let ctx = Ctx::new(p.prec);
    let tau = p.tau(&ctx);
    let z = p.z(&ctx);
    let mt = ctx.neg(&ctx.inv(&tau));
    let zz = ctx.div(&z, &tau);
    let (lp, lm) = z_roots_num(&ctx, 2, &mt, &zz, 24);
    let (rp, rm) = z_roots_num(&ctx, 1, &tau, &z, 24);
    let eps2 = vwengine::exactnum::Cyc::eps().pow(2).unwrap().embed(&ctx);
    for (name, l) in [("L+", &lp), ("L-", &lm)] {
        for (rname, r) in [("e2*R+", ctx.mul(&eps2, rp_clone(&rp))), ("e2*R-", ctx.mul(&eps2, rp_clone(&rm)))] {
            let d = ctx.diff_upper(l, &r).to_f64();
            println!("{} vs {}: {:.3e}", name, rname, d);
        }
    }
}
fn rp_clone(x: &CBall) -> &CBall { x }
