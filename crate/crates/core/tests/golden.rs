use spherical::classify::enumerate;

#[test]
fn enumeration_counts() {
    let counts: Vec<usize> = (1..=4).map(|k| enumerate(k).len()).collect();
    assert_eq!(counts, vec![11, 127, 436, 903]);
}
