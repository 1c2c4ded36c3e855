//! Wang tiles to 3-D translational tiling with six polycubes.
//!
//! The pipeline: parse a Wang tile set ([`wang`]), compile it into six gadget
//! polycubes ([`reduction`]) built from labeled 8×8×8 blocks ([`blocks`]), assemble
//! the polycube tiling that simulates a periodic Wang tiling ([`simulation`]), and
//! check it with the exact-cover engine ([`tiler`]).

pub mod blocks;
pub mod reduction;
pub mod simulation;
pub mod tiler;
pub mod voxel;
pub mod wang;

pub use blocks::{block, fits, self_stacks, BlockGeometry, BlockLabel, Key};
pub use reduction::{compile, encode_colors, Altitude, ColorCode, CoarseLayout, Gadget, PolycubeSet, Side};
pub use simulation::{assemble, decode, floor_period, perturb, AssembleOptions, SimulationError};
pub use tiler::{count_tilings, solve, verify, Defect, DefectKind, Limits, Placement, SolveOutcome, TilingInstance};
pub use voxel::{Polycube, Region, RegionKind, Voxel, VoxelSet};
pub use wang::{find_min_torus, parse_tileset, solve_torus, validate_torus_tiling, WangTile, WangTileSet, WangTorusTiling};
