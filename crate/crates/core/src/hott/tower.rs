//! Iterated identity types and reflexivities, and Π/λ-lifting of judgements.

use super::syntax::{HCtx, HTerm, HType};

/// `Id⁰_A(u) = A`, `Idⁿ⁺¹_A(u) = Id_{Idⁿ_A(u)}(reflⁿ, reflⁿ)`.
pub fn id_tower(a: &HType, u: &HTerm, n: usize) -> HType {
    let (mut ty, mut tm) = (a.clone(), u.clone());
    for _ in 0..n {
        let next_tm = HTerm::refl(ty.clone(), tm.clone());
        ty = HType::id(ty, tm.clone(), tm);
        tm = next_tm;
    }
    ty
}

/// `refl⁰_{A,u} = u`, `reflⁿ⁺¹_{A,u} = refl_{Idⁿ_A(u), reflⁿ}`.
pub fn refl_tower(a: &HType, u: &HTerm, n: usize) -> HTerm {
    let (mut ty, mut tm) = (a.clone(), u.clone());
    for _ in 0..n {
        let next_tm = HTerm::refl(ty.clone(), tm.clone());
        ty = HType::id(ty, tm.clone(), tm);
        tm = next_tm;
    }
    tm
}

/// `Π_Γ.A`: binds the variables of `ctx`, outermost first.
pub fn pi_lift(ctx: &HCtx, ty: &HType) -> HType {
    ctx.iter().rev().fold(ty.clone(), |acc, (x, a)| HType::pi(x, a.clone(), acc))
}

/// `λ_Γ.t`.
pub fn lam_lift(ctx: &HCtx, t: &HTerm) -> HTerm {
    ctx.iter().rev().fold(t.clone(), |acc, (x, a)| HTerm::lam(x, a.clone(), acc))
}

#[cfg(test)]
mod tests {
    use super::super::kernel::Kernel;
    use super::*;

    fn el_b() -> HType {
        HType::el(HTerm::free("B"))
    }

    fn x() -> HTerm {
        HTerm::free("x")
    }

    #[test]
    fn low_levels_unfold() {
        assert_eq!(id_tower(&el_b(), &x(), 0), el_b());
        assert_eq!(refl_tower(&el_b(), &x(), 0), x());
        assert_eq!(refl_tower(&el_b(), &x(), 1), HTerm::refl(el_b(), x()));
        assert_eq!(id_tower(&el_b(), &x(), 1), HType::id(el_b(), x(), x()));
    }

    #[test]
    fn second_level_by_hand() {
        let id1 = HType::id(el_b(), x(), x());
        let r1 = HTerm::refl(el_b(), x());
        assert_eq!(id_tower(&el_b(), &x(), 2), HType::id(id1.clone(), r1.clone(), r1.clone()));
        assert_eq!(refl_tower(&el_b(), &x(), 2), HTerm::refl(id1, r1));
    }

    #[test]
    fn towers_check() {
        let k = Kernel::default();
        let ctx = HCtx::new().with("B", HType::Universe).with("x", el_b());
        for n in 0..=5 {
            let ty = id_tower(&el_b(), &x(), n);
            k.check_type(&ctx, &ty).unwrap();
            k.check(&ctx, &refl_tower(&el_b(), &x(), n), &ty).unwrap();
        }
    }

    #[test]
    fn lifting() {
        let ctx = HCtx::new().with("B", HType::Universe).with("x", el_b());
        assert_eq!(pi_lift(&ctx, &el_b()), HType::pi("B", HType::Universe, HType::pi("x", el_b(), el_b())));
        assert_eq!(lam_lift(&HCtx::new(), &x()), x());
        let k = Kernel::default();
        k.check_closed(&lam_lift(&ctx, &x()), &pi_lift(&ctx, &el_b())).unwrap();
        assert!(lam_lift(&ctx, &x()).free_vars().is_empty());
    }
}
