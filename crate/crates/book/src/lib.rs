//! The mdbook chapters, compiled as doc-tests.

macro_rules! chapter {
    ($name:ident, $file:literal) => {
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        pub mod $name {}
    };
}

chapter!(introduction, "introduction.md");
chapter!(words, "words.md");
chapter!(finite_groups, "finite-groups.md");
chapter!(lattices, "lattices.md");
chapter!(varieties, "varieties.md");
chapter!(geometry, "geometry.md");
chapter!(nullstellensatz, "nullstellensatz.md");
chapter!(cli, "cli.md");
