fn main() {
    println!("asymscat");
}
