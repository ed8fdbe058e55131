use generators::build_frames;
use hermitian_geometry::flat;
use scalar_ring::ScalarExpr;
use va_core::Engine;

#[test]
#[ignore]
fn probe_bfafab() {
    let fr = build_frames(&flat(1).patch).unwrap();
    let b = &fr.backend;
    let eng = Engine::with_default_budget(b);
    let ctx = b.ctx();
    let z1 = ScalarExpr::coord(ctx.holo(0));
    for (ai, bi) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)] {
        let a = fr.e_dn.get(ai).cloned().unwrap_or(fr.e_up[ai - 1].clone());
        let bb = fr.e_dn.get(bi).cloned().unwrap_or(fr.e_up[bi - 1].clone());
        let a = if ai == 1 { fr.e_up[0].clone() } else { a };
        let bb = if bi == 1 { fr.e_up[0].clone() } else { bb };
        let a = a.scale(&z1);
        let sa = eng.embed_section(&a);
        let sb = eng.embed_section(&bb);
        let f = z1.clone();
        let scf = eng.embed_scalar(&f);
        let fb = eng.nop(&scf, &sb).unwrap();
        let lhs = eng.nop(&sa, &fb).unwrap();
        let pair = b.pairing(&a, &bb);
        let rhs = eng.nop(&fb, &sa).unwrap().add(
            &eng.t_deriv(&eng.nop(&scf, &eng.embed_scalar(&pair)).unwrap()).unwrap().scale_int(2),
        );
        let res = lhs.sub(&rhs);
        println!("ai={ai} bi={bi} residual = {}", res.display(ctx, |i| b.name(i)));
    }
}
