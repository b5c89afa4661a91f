use std::sync::OnceLock;

use saxl_core::action::ActionCtx;
use saxl_core::field::FieldCtx;
use saxl_core::geometry::{GeomCtx, GramModel};
use saxl_core::saxl::{suborbit_census, Census};

pub fn geom(q: u64, model: GramModel) -> GeomCtx {
    GeomCtx::new(FieldCtx::from_q(q).unwrap(), model)
}

pub fn small() -> &'static (ActionCtx, Census) {
    static CELL: OnceLock<(ActionCtx, Census)> = OnceLock::new();
    CELL.get_or_init(|| {
        let a = ActionCtx::new(geom(7, GramModel::AntiDiagonal)).unwrap();
        let c = suborbit_census(&a).unwrap();
        (a, c)
    })
}
