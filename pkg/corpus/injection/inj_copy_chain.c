int inj_copy_chain() {
    int x = input();
    int y = x;
    exec(y);
    return 0;
}
