//! Compiles the guide's code blocks as doc-tests, so the book in
//! `book/src` cannot drift away from the library. Built only when
//! rustdoc collects doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub struct Introduction;

#[doc = include_str!("../../../book/src/model.md")]
pub struct Model;

#[doc = include_str!("../../../book/src/greedy.md")]
pub struct Greedy;

#[doc = include_str!("../../../book/src/lazy.md")]
pub struct Lazy;

#[doc = include_str!("../../../book/src/dp.md")]
pub struct Dp;

#[doc = include_str!("../../../book/src/oracle.md")]
pub struct Oracle;

#[doc = include_str!("../../../book/src/reduction.md")]
pub struct Reduction;

#[doc = include_str!("../../../book/src/cli.md")]
pub struct Cli;
