//! Conversions between the geometric and the descriptor formulation, their
//! solution maps, and checks on the resulting matrix pencils.

mod desc_to_geo;
mod geo_to_desc;
mod pencil;

pub use desc_to_geo::{
    desc_solution_to_geo, descriptor_to_geometric, geo_solution_to_desc, kernel_overlap, GeoDims,
    GeoMaps,
};
pub(crate) use desc_to_geo::constraint_basis;
pub use geo_to_desc::{geometric_to_descriptor, lift_solution, project_solution, LiftData, LiftDims};
pub use pencil::{
    pencil_regular, pencil_regular_with, transfer_positive_real, PencilReport, PositiveRealReport,
    TransferSample, PENCIL_SEED,
};

use crate::error::Result;
use crate::phcore::{DescriptorPH, GeometricPH};

/// Both stages of [`roundtrip_q_identity`] with their intermediate data.
#[derive(Clone, Debug)]
pub struct Roundtrip {
    pub geometric: GeometricPH,
    pub maps: GeoMaps,
    pub descriptor: DescriptorPH,
    pub lift: LiftData,
}

/// Descriptor → geometric → descriptor.
pub fn roundtrip(sys: &DescriptorPH) -> Result<Roundtrip> {
    let (geometric, maps) = descriptor_to_geometric(sys)?;
    let (descriptor, lift) = geometric_to_descriptor(&geometric)?;
    Ok(Roundtrip {
        geometric,
        maps,
        descriptor,
        lift,
    })
}

/// An equivalent descriptor system with `Q = I` and a larger state.
pub fn roundtrip_q_identity(sys: &DescriptorPH) -> Result<DescriptorPH> {
    roundtrip(sys).map(|r| r.descriptor)
}
