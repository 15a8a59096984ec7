int ok_other_variable_same_name_style() {
    int *p_data = malloc(4);
    int p_flag = 3;
    free(p_data);
    int x = p_flag;
    return x;
}
