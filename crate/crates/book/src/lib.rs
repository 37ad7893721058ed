//! Compiles the guide's listings as doctests; mdbook cannot resolve crate
//! dependencies on its own.

macro_rules! chapter {
    ($name:ident, $file:literal) => {
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        pub mod $name {}
    };
}

chapter!(introduction, "introduction.md");
chapter!(graphs, "graphs.md");
chapter!(refinement, "refinement.md");
chapter!(logic, "logic.md");
chapter!(networks, "networks.md");
chapter!(homomorphisms, "homomorphisms.md");
chapter!(cli, "cli.md");
