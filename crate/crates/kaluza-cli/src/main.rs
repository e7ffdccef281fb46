fn main() {
    println!("kaluza");
}
