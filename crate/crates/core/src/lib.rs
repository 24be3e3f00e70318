//! Exact geometric predicates for the Apollonius diagram of spheres in three
//! dimensions.
//!
//! Every predicate evaluates a constant number of signs of polynomial
//! expressions in the input coordinates and radii, using exact rational
//! arithmetic. The [`oracle`] module provides an independent floating point
//! construction used to cross-check the exact predicates.

/// Declares a fieldless enum with a fixed upper-case token per variant.
macro_rules! token_enum {
    ($(#[$meta:meta])* $vis:vis enum $name:ident { $($(#[$vmeta:meta])* $variant:ident => $token:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        $vis enum $name { $($(#[$vmeta])* $variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn token(self) -> &'static str {
                match self { $($name::$variant => $token),+ }
            }

            pub fn parse(s: &str) -> Option<$name> {
                match s { $($token => Some($name::$variant),)+ _ => None }
            }
        }

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(self.token())
            }
        }
    };
}

pub mod base;
pub mod cli;
pub mod edge_conflict;
pub mod error;
pub mod fuzz;
pub mod insphere;
pub mod kernel;
pub mod oracle;
pub mod order;
pub mod scene;
pub mod sites;

pub use error::{GeomError, GeomResult};
pub use kernel::{Rational, Sign};
pub use sites::Site;
