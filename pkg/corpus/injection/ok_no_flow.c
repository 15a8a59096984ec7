int ok_no_flow() {
    int x = input();
    int y = 2;
    exec(y);
    return x;
}
