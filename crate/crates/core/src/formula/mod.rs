//! A small language of quantifier-free formulas over the ordered field of
//! rationals with `exp`, the hypothesis spaces they define, and a seeded
//! search for shattering witnesses.
//!
//! ```text
//! formula     := implication
//! implication := disjunction [ "->" implication ]
//! disjunction := conjunction { "or" conjunction }
//! conjunction := unary { "and" unary }
//! unary       := "not" unary | "true" | "false" | "(" formula ")" | comparison
//! comparison  := term ( "<" | "<=" | "=" | "!=" | ">" | ">=" ) term
//! term        := product { ( "+" | "-" ) product }
//! product     := factor { "*" factor }
//! factor      := "-" factor | number | variable | "exp" "(" term ")" | "(" term ")"
//! number      := digits [ "." digits ] [ "/" digits ]
//! ```

mod ast;
mod builders;
mod eval;
mod parser;
mod shatter;
mod space;

pub use ast::{CmpOp, Expr, Formula, Term};
pub use builders::{relu_graph, sigmoid_net, sigmoid_net_classify, sigmoid_net_objects, sigmoid_net_params, RELU_GRAPH};
pub use eval::Backend;
pub use parser::{parse_formula, ParseError};
pub use shatter::{nip_shatter_search, SearchConfig, SearchStatus, ShatterSearch};
pub use space::{definable_space, detect_closed_form, ClosedForm, DefinableSpace, ParameterSource, GRID_LIMIT};
