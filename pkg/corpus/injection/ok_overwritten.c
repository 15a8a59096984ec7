int ok_overwritten() {
    int x = input();
    x = 5;
    exec(x);
    return 0;
}
