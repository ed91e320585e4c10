// Runs every example's main as a test.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                main().unwrap();
            }
        }
    };
}

example!(verify_pair);
example!(case_taxonomy);
example!(subspace_correlation);
example!(weighted_inner_product);
example!(oracles);
example!(fuzz_campaign);
example!(matrix_files);
