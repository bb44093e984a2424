//! Exact character theory for small finite groups of Lie type.
//!
//! The pipeline is: build a matrix group by enumeration ([`matgrp`]), split
//! it into conjugacy classes ([`classes`]), compute its character table by
//! the Dixon–Schneider method ([`dixon`]) with values in cyclotomic fields
//! ([`cyclo`]), then work with class functions ([`classfn`]). The [`weil`]
//! module evaluates Weil characters of unitary groups in closed form, and
//! [`theorems`] turns statements about conjugation characters, Steinberg
//! squares and torus restrictions into checks with structured reports.

pub mod classes;
pub mod classfn;
pub mod cyclo;
pub mod dixon;
pub mod gf;
pub mod matgrp;
pub mod modp;
pub mod poly;
pub mod rcf;
pub mod theorems;
pub mod weil;
