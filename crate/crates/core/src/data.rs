//! Published starting data: the index-1 log for `s = 3` and the index-4 logs
//! for `K_12` and `K_24`.

/// Log of the index-1 current graph over `Z_32`.
pub const S3_LOG: &str = "3 x 1 y 31 z 29 24 20 2 21 25 15 6 16 22 7 28 8 5 23 17 10 26 9 14 12 4 11 13 w 19 30 18 27";

/// Rows `[0]..[3]` of the index-4 logs over `Z_12`.
pub const K12_ROWS: [&str; 4] = [
    "11 8 9 1 4 3 6 2 7 5 10",
    "1 4 3 11 8 9 6 10 5 7 2",
    "11 1 2 7 5 10 4 8 6 9 3",
    "1 11 10 5 7 2 8 4 6 3 9",
];

/// Rows `[0]..[3]` of the index-4 logs over `Z_24`.
pub const K24_ROWS: [&str; 4] = [
    "19 16 4 1 21 20 12 8 3 5 2 13 11 22 10 17 7 14 6 15 9 18 23",
    "5 8 20 23 3 4 12 16 21 19 22 11 13 2 14 7 17 10 18 9 15 6 1",
    "19 20 21 1 4 23 5 6 15 9 18 8 16 10 17 7 14 12 2 13 11 22 3",
    "5 4 3 23 20 1 19 18 9 15 6 16 8 14 7 17 10 12 22 11 13 2 21",
];

/// Parses one of the row tables into numbers.
pub fn parse_rows(rows: &[&str; 4]) -> [Vec<u32>; 4] {
    rows.map(|r| r.split_whitespace().map(|t| t.parse().unwrap()).collect())
}
